"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in RESULTS and written in the terminal summary
(see conftest.py), so they show up in plain ``pytest`` runs too.
Run directly with ``python tests/test_acceptance.py``.
"""

import json
import math
import sys
import time
from collections import Counter

import numpy as np
import pytest

from conftest import random_surface, random_triangle
from quadmesh import (
    ApproxTriangle,
    QuadraticSurface,
    Region,
    WitnessKind,
    chord_error,
    chord_error_offset,
    convex_optimal,
    graph_automorphism,
    measure,
    mirror,
    normalize,
    oracle_max_area_interpolating,
    oracle_max_area_offset,
    saddle_interpolating,
    saddle_offset,
    sampled_triangle_error,
    theoretical_density,
    tile_region,
    triangle_error,
    vertex_density,
)
from quadmesh.cli import main
from quadmesh.optimal import CONVEX, SADDLE

RESULTS = []
S3, S5 = math.sqrt(3), math.sqrt(5)


def verdict(n, title, checks):
    """Record and assert a criterion; ``checks`` maps label -> (ok, detail)."""
    failed = [f"{k} ({d})" for k, (ok, d) in checks.items() if not ok]
    passed = not failed
    detail = "; ".join(f"{k}: {d}" for k, (ok, d) in checks.items()) if passed else "; ".join(failed)
    RESULTS.append(f"[{'PASS' if passed else 'FAIL'}] criterion {n:>2}: {title} -- {detail}")
    assert passed, f"criterion {n} failed: " + "; ".join(failed)


def edges(t):
    return ((t.p1, t.p2), (t.p2, t.p3), (t.p3, t.p1))


def shoelace(t):
    (x1, y1), (x2, y2), (x3, y3) = t.p1, t.p2, t.p3
    return 0.5 * abs(x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))


def test_criterion_01_density_constants():
    printed = {
        ("2xy", "offset"): (SADDLE, 0.43301),
        ("2xy", "interp"): (SADDLE, 0.44721),
        ("x^2+y^2", "offset"): (CONVEX, 0.38490),
        ("x^2+y^2", "interp"): (CONVEX, 0.76980),
    }
    checks = {}
    for (frame, mode), (q, value) in printed.items():
        got = theoretical_density(q, 1.0, mode)
        checks[f"{frame}/{mode}"] = (abs(got - value) <= 1e-5, f"{got:.6f} vs {value}")
    verdict(1, "density constants", checks)


def test_criterion_02_closed_form_areas():
    checks = {}
    for eps in (1.0, 0.37, 5.0):
        cases = {
            "saddle interp": (saddle_interpolating(eps), S5 * eps, 0.0),
            "saddle offset": (saddle_offset(eps), 4 * eps / S3, -eps / 3),
            "convex interp": (convex_optimal(eps, "interp"), 0.75 * S3 * eps, 0.0),
        }
        for name, (r, area, dz) in cases.items():
            ok = abs(r.area - area) <= 1e-12 * area and abs(shoelace(r.triangle) - area) <= 1e-12 * area and r.dz == dz
            prev = checks.get(name, (True, ""))[0]
            checks[name] = (prev and ok, f"shoelace {shoelace(r.triangle):.12f} at eps={eps}")
    verdict(2, "closed-form areas", checks)


def test_criterion_03_tightness():
    eps = 1.0
    t = saddle_interpolating(eps).triangle
    chords = [chord_error(SADDLE, a, b).value for a, b in edges(t)]
    r = saddle_offset(eps)
    w = triangle_error(SADDLE, r.triangle)
    verdict(
        3,
        "tightness",
        {
            "interp chords": (all(abs(c - eps) <= 1e-9 for c in chords), ", ".join(f"{c:.12f}" for c in chords)),
            "offset error": (abs(w.value - eps) <= 1e-9, f"{w.value:.12f}"),
            "offset witness": (w.kind is not WitnessKind.INTERIOR, w.kind.value),
        },
    )


def test_criterion_04_oracle_equivalence():
    t0 = time.perf_counter()
    interp = oracle_max_area_interpolating(1.0)
    t1 = time.perf_counter()
    offset = oracle_max_area_offset(1.0)
    t2 = time.perf_counter()
    verdict(
        4,
        "oracle equivalence",
        {
            "interp area": (interp.area >= 0.99 * S5, f"{interp.area:.6f} vs {S5:.6f}"),
            "offset area": (offset.area >= 0.99 * 4 / S3, f"{offset.area:.6f} vs {4 / S3:.6f}"),
            "offset dz": (abs(offset.dz + 1 / 3) <= 0.05, f"{offset.dz:.4f}"),
            "offset beats interp": (offset.area > interp.area, f"{offset.area / interp.area:.4f}"),
            "runtime": (t1 - t0 < 120 and t2 - t1 < 120, f"{t1 - t0:.1f}s, {t2 - t1:.1f}s"),
        },
    )


def test_criterion_05_geometric_coincidences():
    eps = 1.0
    # the first-quadrant twin (dz = +eps/3) has the single descending edge
    t = mirror(saddle_offset(eps, 1.0)).triangle
    sides = [(b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2 for a, b in edges(t)]
    desc = [(a, b) for a, b in edges(t) if (b[0] - a[0]) * (b[1] - a[1]) < 0]
    (a, b), = desc
    xy = 0.25 * (a[0] + b[0]) * (a[1] + b[1])
    verdict(
        5,
        "equilateral offset triangle, hyperbola contact",
        {
            "squared sides": (max(sides) - min(sides) <= 1e-9, ", ".join(f"{s:.12f}" for s in sides)),
            "midpoint x*y": (abs(xy - 2 * eps) <= 1e-9, f"{xy:.12f}"),
        },
    )


def test_criterion_06_pseudo_euclidean_family():
    eps = 1.0
    checks = {}
    for name, make in (("interp", saddle_interpolating), ("offset", saddle_offset)):
        ref = None
        worst = 0.0
        for m in (0.25, 0.5, 1.0, 2.0, 4.0):
            r = make(eps, m)
            errs = sorted(chord_error_offset(SADDLE, a, b, r.dz).value for a, b in edges(r.triangle))
            sig = np.array([shoelace(r.triangle), *errs, triangle_error(SADDLE, r.triangle).value])
            ref = sig if ref is None else ref
            worst = max(worst, float(np.max(np.abs(sig - ref))))
        checks[name] = (worst <= 1e-9, f"max deviation {worst:.2e}")
    verdict(6, "pseudo-Euclidean invariance", checks)


def test_criterion_07_mesh_soundness():
    eps = 1.0
    r = saddle_offset(eps)
    gaps = {}
    checks = {}
    for side in (20, 40, 80):
        patch = tile_region(SADDLE, r, Region.square(side * math.sqrt(eps)))
        rep = measure(SADDLE, patch, eps, "offset", samples_per_triangle=8 if side > 20 else 16)
        gaps[side] = abs(rep.empirical_density / rep.theoretical_density - 1)
        if side == 20:
            edge_use = Counter()
            for t in patch.triangles.tolist():
                for i, j in ((0, 1), (1, 2), (2, 0)):
                    edge_use[(min(t[i], t[j]), max(t[i], t[j]))] += 1
            checks["sampled error"] = (rep.sampled_max_error <= eps * (1 + 1e-6), f"{rep.sampled_max_error:.9f}")
            checks["watertight"] = (max(edge_use.values()) == 2, f"{sum(v == 2 for v in edge_use.values())} shared edges")
    checks["density side 20"] = (gaps[20] <= 0.10, f"off by {gaps[20]:.1%}, limit 10%")
    checks["density side 80"] = (gaps[80] <= 0.025, f"off by {gaps[80]:.1%}, limit 2.5%")
    checks["monotone"] = (gaps[20] > gaps[40] > gaps[80], ", ".join(f"{s}: {g:.2%}" for s, g in gaps.items()))
    verdict(7, "mesh soundness", checks)


def test_criterion_08_vertex_density():
    eps = 1.0
    patch = tile_region(SADDLE, saddle_offset(eps), Region.square(80 * math.sqrt(eps)))
    rep = measure(SADDLE, patch, eps, "offset", samples_per_triangle=2)
    vd = vertex_density(patch)
    ratio = vd / rep.empirical_density
    asymptotic = vd / rep.theoretical_density
    verdict(
        8,
        "vertex density",
        {
            "vertices / triangles": (abs(ratio / 0.5 - 1) <= 0.05, f"{ratio:.4f} (vs theoretical density: {asymptotic:.4f})"),
        },
    )


def test_criterion_09_transforms():
    rng = np.random.default_rng(9)
    worst_round, worst_scale, worst_graph, worst_vert = 0.0, 0.0, 0.0, 0.0
    for _ in range(100):
        q = random_surface(rng)
        nf = normalize(q)
        x, y = rng.uniform(-3, 3, (2, 100))
        z = q(x, y)
        X, Y, Z = nf.transform(x, y, z)
        worst_round = max(worst_round, float(np.max(np.abs(Z - nf.canonical(X, Y)))))
        back = nf.transform.inverse()(X, Y, Z)
        worst_round = max(worst_round, float(np.max(np.abs(np.subtract(back, (x, y, z))))))
        worst_scale = max(worst_scale, abs(nf.area_scale - math.sqrt(abs(q.discriminant()))))
        T = graph_automorphism(q, tuple(rng.uniform(-3, 3, 2)), tuple(rng.uniform(-3, 3, 2)))
        X, Y, Z = T(x, y, z)
        worst_graph = max(worst_graph, float(np.max(np.abs(Z - q(X, Y)))))
        h = rng.uniform(-2, 2, 100)
        _, _, Zh = T(x, y, z + h)
        worst_vert = max(worst_vert, float(np.max(np.abs(Zh - Z - h))))
    verdict(
        9,
        "transform correctness",
        {
            "normalize round trip": (worst_round < 1e-9, f"{worst_round:.1e}"),
            "area scale": (worst_scale <= 1e-12, f"{worst_scale:.1e}"),
            "automorphism graph": (worst_graph < 1e-9, f"{worst_graph:.1e}"),
            "vertical distance": (worst_vert < 1e-9, f"{worst_vert:.1e}"),
        },
    )


def test_criterion_10_error_engine():
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(200):
        q = random_surface(rng)
        t = ApproxTriangle.on(q, *random_triangle(rng), dz=rng.uniform(-1, 1))
        exact = triangle_error(q, t).value
        worst = max(worst, abs(sampled_triangle_error(q, t, n=200) - exact) / max(exact, 1e-300))
    interior = 0
    for _ in range(1000):
        q = random_surface(rng, "saddle")
        t = ApproxTriangle.on(q, *random_triangle(rng), dz=rng.uniform(-1, 1))
        interior += triangle_error(q, t).kind is WitnessKind.INTERIOR
    verdict(
        10,
        "error engine agreement",
        {
            "sampled vs exact": (worst <= 1e-6, f"max relative gap {worst:.1e}"),
            "saddle interior witnesses": (interior == 0, f"{interior} of 1000"),
        },
    )


def test_criterion_11_determinism(tmp_path):
    base = ["gen", "--coeffs", "1.5,-0.4,-2,0.3,1,0", "--eps", "0.5", "--region", "-6,-5,7,6", "--m", "1.7"]
    outputs = []
    for k, jobs in enumerate((1, 1, 4)):
        obj, rep = tmp_path / f"{k}.obj", tmp_path / f"{k}.json"
        assert main(base + ["--out", str(obj), "--report", str(rep), "--jobs", str(jobs)]) == 0
        outputs.append((obj.read_bytes(), rep.read_bytes()))
    json.loads(outputs[0][1])
    verdict(
        11,
        "byte-identical gen output",
        {
            "repeat": (outputs[0] == outputs[1], f"{len(outputs[0][0])} OBJ bytes"),
            "parallel": (outputs[0] == outputs[2], "4 worker threads"),
        },
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
