import math

import numpy as np
import pytest

from quadmesh import (
    SearchBudgetExceeded,
    SearchConfig,
    oracle_convex,
    oracle_dz_profile,
    oracle_max_area_interpolating,
    oracle_max_area_offset,
    triangle_error,
)
from quadmesh.optimal import CONVEX, SADDLE
from quadmesh.oracle import _max_scale_sq, smallest_enclosing_radius
from quadmesh.vertical_error import ApproxTriangle

S3, S5 = math.sqrt(3), math.sqrt(5)
CFG = SearchConfig()


@pytest.fixture(scope="module")
def interp():
    return oracle_max_area_interpolating(1.0)


@pytest.fixture(scope="module")
def offset():
    return oracle_max_area_offset(1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(resolution=7)
    with pytest.raises(ValueError):
        SearchConfig(rounds=0)
    with pytest.raises(ValueError):
        SearchConfig(feas_slack=-1)


def test_scale_projection():
    hi, lo = np.array([0.5, 0.0, 1.0]), np.array([-0.25, -1.0, 0.0])
    s2 = _max_scale_sq(hi, lo, np.array([0.0, 0.5, -1.0]), 1.0)
    assert s2.tolist() == [2.0, 1.5, 2.0]


def test_interpolating_search(interp):
    assert 2.214 <= interp.area <= S5 * (1 + 3 * CFG.feas_slack)
    assert interp.dz == 0
    t = interp.triangle
    f0 = [abs(SADDLE.quadratic_part(b[0] - a[0], b[1] - a[1])) for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))]
    assert all(4 * (1 - 1e-3) <= v <= 4 * (1 + 1e-9) for v in f0)


def test_interpolating_homogeneity(interp):
    big = oracle_max_area_interpolating(4.0)
    assert big.area == pytest.approx(4 * interp.area, rel=1e-9)


def test_offset_search(offset, interp):
    assert offset.area >= 0.99 * 4 / S3
    assert offset.area <= 4 / S3 * (1 + 3 * CFG.feas_slack)
    assert abs(offset.dz + 1 / 3) <= 0.05
    assert offset.area > interp.area


def test_offset_fixed_zero_reproduces_interpolating(interp):
    fixed = oracle_max_area_offset(1.0, dz=0.0)
    assert fixed.area == pytest.approx(interp.area, rel=1e-9)


def test_outcomes_are_feasible(offset, interp):
    for out in (offset, interp):
        t = ApproxTriangle.on(SADDLE, *out.triangle, out.dz)
        assert triangle_error(SADDLE, t).value <= 1 + CFG.feas_slack
        assert out.residual <= CFG.feas_slack


def test_history_is_monotone(offset, interp):
    for out in (offset, interp):
        assert all(b >= a for a, b in zip(out.history, out.history[1:]))


def test_determinism():
    cfg = SearchConfig(resolution=8, rounds=10, starts=2)
    a = oracle_max_area_offset(1.0, cfg)
    b = oracle_max_area_offset(1.0, cfg)
    assert a == b


def test_dz_profile():
    grid = np.linspace(-1, 1, 13)
    prof = oracle_dz_profile(1.0, list(grid) + [-1 / 3])
    best = max(prof, key=lambda s: s.area)
    assert best.dz == pytest.approx(-1 / 3) and best.area == pytest.approx(4 / S3)
    assert prof[6].area == pytest.approx(S5)
    assert prof[12].area == 0
    with pytest.raises(ValueError):
        oracle_dz_profile(1.0, [1.5])


def test_dz_profile_searched_tracks_closed_form():
    cfg = SearchConfig(resolution=8, rounds=20, starts=2)
    for s in oracle_dz_profile(1.0, [-0.5, 0.0, 0.5], search=True, cfg=cfg):
        # the search sees both mirror orientations
        target = max(s.area, math.sqrt(5 - 3 * s.dz) * math.sqrt(1 + s.dz))
        assert s.searched_area == pytest.approx(target, rel=0.01)
        assert s.searched_area <= target * (1 + 3e-6)


def test_convex_search():
    out = oracle_convex(1.0)
    assert out.area == pytest.approx(0.75 * S3, rel=0.01)
    assert smallest_enclosing_radius(*out.triangle) == pytest.approx(1.0, rel=0.01)
    free = oracle_convex(1.0, free_dz=True)
    assert free.area == pytest.approx(1.5 * S3, rel=0.01)
    assert free.dz == pytest.approx(-1.0, abs=0.05)
    assert triangle_error(CONVEX, ApproxTriangle.on(CONVEX, *free.triangle, free.dz)).value <= 1 + 1e-6


def test_enclosing_radius():
    assert smallest_enclosing_radius((0, 0), (2, 0), (1, 0.1)) == pytest.approx(1.0)
    pts = [(math.cos(a), math.sin(a)) for a in (0, 2 * math.pi / 3, 4 * math.pi / 3)]
    assert smallest_enclosing_radius(*pts) == pytest.approx(1.0)


def test_infeasible_result_raises(monkeypatch):
    from quadmesh import oracle
    from quadmesh.vertical_error import ErrorWitness, WitnessKind

    # pretend the exact check disagrees with the search
    monkeypatch.setattr(oracle, "triangle_error", lambda q, t: ErrorWitness(2.0, (0.0, 0.0), WitnessKind.VERTEX))
    with pytest.raises(SearchBudgetExceeded):
        oracle.oracle_convex(1.0, SearchConfig(resolution=8, rounds=1, starts=1))
