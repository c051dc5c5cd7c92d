"""Brute-force largest-triangle searches used to re-derive the closed forms.

The search pins p1 at the origin and moves p2, p3 through the half-plane
x > 0 (plus the offset dz when it is free). It never assumes the symmetric
shape of the closed-form answer.

Feasibility is handled exactly rather than by penalty: for a fixed shape
and offset the deviation at scale s is ``dz + s^2 g`` where g is the
interpolating deviation of the shape, so the largest admissible scale
follows from the signed extrema of g. The search therefore runs over shapes
only, every evaluated point is feasible, and the objective is the area at
that largest scale.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import SearchBudgetExceeded
from .optimal import CONVEX, SADDLE, offset_area
from .quadratic import QuadraticSurface
from .vertical_error import ApproxTriangle, check_eps, chord_error, signed_extrema, triangle_error


@dataclass(frozen=True)
class SearchConfig:
    resolution: int = 9
    rounds: int = 40
    half_width: float = 4.0
    feas_slack: float = 1e-6
    starts: int = 4
    max_polls: int = 200

    def __post_init__(self):
        if self.resolution < 8:
            raise ValueError("resolution must be at least 8")
        if self.rounds < 1:
            raise ValueError("need at least one refinement round")
        if self.feas_slack < 0:
            raise ValueError("feasibility slack must be nonnegative")
        if self.half_width <= 0 or self.starts < 1:
            raise ValueError("half_width and starts must be positive")


@dataclass(frozen=True)
class SearchOutcome:
    p2: tuple
    p3: tuple
    dz: float
    area: float
    residual: float
    history: tuple
    evaluations: int

    @property
    def triangle(self):
        return ((0.0, 0.0), self.p2, self.p3)


class DzSample(NamedTuple):
    dz: float
    area: float
    searched_area: Optional[float] = None


def _shape_arrays(X):
    n = X.shape[0]
    P = np.zeros((n, 3, 2))
    P[:, 1] = X[:, 0:2]
    P[:, 2] = X[:, 2:4]
    cross = X[:, 0] * X[:, 3] - X[:, 1] * X[:, 2]
    return P, 0.5 * np.abs(cross)


def _max_scale_sq(hi, lo, dz, eps):
    """Largest s^2 with -eps <= dz + s^2 g <= eps for g in [lo, hi]."""
    with np.errstate(divide="ignore", invalid="ignore"):
        up = np.where(hi > 0, (eps - dz) / hi, np.inf)
        down = np.where(lo < 0, (eps + dz) / (-lo), np.inf)
    s2 = np.minimum(up, down)
    s2 = np.where(np.abs(dz) <= eps, s2, 0.0)
    return np.where(np.isfinite(s2), s2, 0.0)


class _Problem:
    """Objective over rows (x2, y2, x3, y3[, dz])."""

    def __init__(self, q: QuadraticSurface, eps: float, cfg: SearchConfig, free_dz: bool, fixed_dz: float, chords_only: bool):
        self.q, self.eps, self.cfg = q, eps, cfg
        self.free_dz = free_dz
        self.fixed_dz = fixed_dz
        self.chords_only = chords_only
        self.evaluations = 0
        self.hw = cfg.half_width * math.sqrt(eps)

    @property
    def dim(self) -> int:
        return 5 if self.free_dz else 4

    def dz_of(self, X):
        return X[:, 4] if self.free_dz else np.full(X.shape[0], self.fixed_dz)

    def in_box(self, X):
        hw = self.hw
        ok = (X[:, 0] > 0) & (X[:, 2] > 0) & (X[:, 0] <= hw) & (X[:, 2] <= hw)
        ok &= (np.abs(X[:, 1]) <= hw) & (np.abs(X[:, 3]) <= hw)
        if self.free_dz:
            ok &= np.abs(X[:, 4]) <= self.eps
        return ok

    def scale_sq(self, X):
        P, _ = _shape_arrays(X)
        if self.chords_only:
            # each chord obeys |f0(p_i - p_j)| / 4 <= eps
            worst = np.zeros(X.shape[0])
            for i, j in ((0, 1), (1, 2), (2, 0)):
                e = P[:, j] - P[:, i]
                worst = np.maximum(worst, np.abs(self.q.quadratic_part(e[:, 0], e[:, 1])) / 4.0)
            with np.errstate(divide="ignore"):
                s2 = np.where(worst > 0, self.eps / worst, 0.0)
            return s2
        Z = self.q.evaluate(P[..., 0], P[..., 1])
        hi, lo = signed_extrema(self.q, P, Z)
        return _max_scale_sq(hi, lo, self.dz_of(X), self.eps)

    def objective(self, X):
        self.evaluations += X.shape[0]
        _, area0 = _shape_arrays(X)
        val = area0 * self.scale_sq(X)
        return np.where(self.in_box(X) & np.isfinite(val), val, -np.inf)

    def rescale(self, x):
        """Move a shape onto its largest feasible scale (objective unchanged).

        With a free offset, dz is also moved to the centre of the shape's
        deviation band [lo, hi], which never lowers the objective: the
        admissible scale becomes 2 eps / (hi - lo).
        """
        y = x.copy()
        if self.free_dz:
            P, _ = _shape_arrays(y[None])
            hi, lo = signed_extrema(self.q, P, self.q.evaluate(P[..., 0], P[..., 1]))
            if hi[0] > lo[0]:
                y[4] = -self.eps * (hi[0] + lo[0]) / (hi[0] - lo[0])
        s = math.sqrt(float(self.scale_sq(y[None])[0]))
        y[:4] *= s
        return y

    def grid(self):
        r = self.cfg.resolution
        xs = np.linspace(self.hw / r, self.hw, r)
        ys = np.linspace(-self.hw, self.hw, r)
        axes = [xs, ys, xs, ys]
        if self.free_dz:
            axes.append(np.linspace(-self.eps, self.eps, r))
        mesh = np.meshgrid(*axes, indexing="ij")
        steps = [xs[1] - xs[0], ys[1] - ys[0]] * 2
        if self.free_dz:
            steps.append(2.0 * self.eps / (r - 1))
        return np.column_stack([m.ravel() for m in mesh]), np.array(steps)


_LEVELS = (-1.0, -0.5, 0.0, 0.5, 1.0)


def _directions(dim: int) -> np.ndarray:
    """All nonzero vectors of {-1, -1/2, 0, 1/2, 1}^dim.

    The optimum sits where several error constraints meet, so improving
    moves lie in thin cones; the half-steps let the poll find them.
    """
    dirs = [d for d in itertools.product(_LEVELS, repeat=dim) if any(d)]
    return np.array(dirs)


def _pattern_search(prob: _Problem, x0, f0, step0, rounds: int):
    dirs = _directions(prob.dim)
    x, fx = prob.rescale(x0), f0
    h = step0.copy()
    history = []
    for _ in range(rounds):
        for _ in range(prob.cfg.max_polls):
            trial = x[None] + dirs * h[None]
            vals = prob.objective(trial)
            k = int(np.argmax(vals))
            if not vals[k] > fx:
                break
            x, fx = prob.rescale(trial[k]), float(vals[k])
        history.append(fx)
        h = h * 0.5
    return x, fx, history


def _search(prob: _Problem) -> SearchOutcome:
    X, steps = prob.grid()
    vals = prob.objective(X)
    if not np.any(np.isfinite(vals) & (vals > 0)):
        raise SearchBudgetExceeded("no feasible grid point")
    # lowest grid index wins ties
    order = np.argsort(-vals, kind="stable")[: prob.cfg.starts]
    best = None
    for idx in order:
        if not vals[idx] > 0:
            continue
        x, fx, hist = _pattern_search(prob, X[idx], float(vals[idx]), steps, prob.cfg.rounds)
        if best is None or fx > best[1]:
            best = (x, fx, hist)
    x, fx, hist = best
    dz = float(prob.dz_of(x[None])[0])
    return _outcome(prob, x, dz, hist)


def _outcome(prob: _Problem, x, dz: float, hist) -> SearchOutcome:
    p2 = (float(x[0]), float(x[1]))
    p3 = (float(x[2]), float(x[3]))
    tri = ApproxTriangle.on(prob.q, (0.0, 0.0), p2, p3, dz)
    if prob.chords_only:
        err = max(chord_error(prob.q, a, b).value for a, b in ((tri.p1, tri.p2), (tri.p2, tri.p3), (tri.p3, tri.p1)))
    else:
        err = triangle_error(prob.q, tri).value
    residual = err - prob.eps
    if residual > prob.cfg.feas_slack * prob.eps:
        raise SearchBudgetExceeded(f"best point violates the error budget by {residual:.3g}")
    return SearchOutcome(p2, p3, dz, tri.area, residual, tuple(hist), prob.evaluations)


def _reflect(out: SearchOutcome) -> SearchOutcome:
    """Saddle symmetry (x, y, dz) -> (x, -y, -dz); stays in the x > 0 half-plane."""
    return SearchOutcome(
        (out.p2[0], -out.p2[1]), (out.p3[0], -out.p3[1]), -out.dz, out.area, out.residual, out.history, out.evaluations
    )


def oracle_max_area_interpolating(eps: float, cfg: SearchConfig = SearchConfig(), q: QuadraticSurface = SADDLE) -> SearchOutcome:
    """Largest triangle on f = 2xy with every chord error at most ``eps``."""
    eps = check_eps(eps)
    return _search(_Problem(q, eps, cfg, free_dz=False, fixed_dz=0.0, chords_only=True))


def oracle_max_area_offset(eps: float, cfg: SearchConfig = SearchConfig(), dz: Optional[float] = None) -> SearchOutcome:
    """Largest triangle on f = 2xy with a shared vertex offset and total error at most ``eps``.

    With ``dz=None`` the offset is searched over [-eps, eps]; otherwise it is
    held fixed. The two mirror-image optima (dz of either sign) are
    reported in the dz <= 0 orientation.
    """
    eps = check_eps(eps)
    free = dz is None
    prob = _Problem(SADDLE, eps, cfg, free_dz=free, fixed_dz=0.0 if free else float(dz), chords_only=False)
    out = _search(prob)
    if free and out.dz > 0:
        out = _reflect(out)
    return out


def oracle_dz_profile(eps: float, dz_grid, search: bool = False, cfg: SearchConfig = SearchConfig()):
    """Closed-form (and optionally searched) best area for each fixed offset.

    The closed form belongs to the configuration with two descending edges.
    The search covers both orientations, so it tracks the larger of the
    closed form at dz and at -dz.
    """
    eps = check_eps(eps)
    out = []
    for dz in dz_grid:
        dz = float(dz)
        if abs(dz) > eps:
            raise ValueError(f"offset {dz} outside [-eps, eps]")
        searched = oracle_max_area_offset(eps, cfg, dz=dz).area if search else None
        out.append(DzSample(dz, offset_area(eps, dz), searched))
    return out


def oracle_convex(eps: float, cfg: SearchConfig = SearchConfig(), free_dz: bool = False) -> SearchOutcome:
    """Largest triangle on f = x^2 + y^2 with total error at most ``eps``."""
    eps = check_eps(eps)
    return _search(_Problem(CONVEX, eps, cfg, free_dz=free_dz, fixed_dz=0.0, chords_only=False))


def smallest_enclosing_radius(p1, p2, p3) -> float:
    """Radius of the smallest circle containing a triangle."""
    P = np.array([p1, p2, p3], dtype=float)
    sides = [np.linalg.norm(P[(k + 1) % 3] - P[(k + 2) % 3]) for k in range(3)]
    a, b, c = sorted(sides)
    if a * a + b * b <= c * c:  # right or obtuse: longest side is a diameter
        return 0.5 * c
    area = 0.5 * abs((P[1, 0] - P[0, 0]) * (P[2, 1] - P[0, 1]) - (P[1, 1] - P[0, 1]) * (P[2, 0] - P[0, 0]))
    return a * b * c / (4.0 * area)
