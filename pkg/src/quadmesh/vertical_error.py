"""Exact and sampled L-infinity vertical error of linear pieces against a quadratic.

Over a triangle the signed deviation d = f_hat - f is a quadratic polynomial,
so its extrema over the closed triangle sit in a finite candidate set:
the three vertices, one stationary point per edge, and at most one
stationary point in the interior (only when f is definite).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateTriangle, InvalidTolerance
from .quadratic import Point, QuadraticSurface, SurfaceClass, classify

# candidate slots: 3 vertices, edges p1p2 / p2p3 / p3p1, interior
N_CANDIDATES = 7
EDGES = ((0, 1), (1, 2), (2, 0))
INSIDE_TOL = 1e-12
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Tolerance:
    eps: float

    def __post_init__(self):
        if not np.isfinite(self.eps) or self.eps <= 0:
            raise InvalidTolerance(f"tolerance must be positive, got {self.eps!r}")


def check_eps(eps: float) -> float:
    return Tolerance(float(eps)).eps


class WitnessKind(enum.Enum):
    VERTEX = "vertex"
    EDGE = "edge"  # edge midpoint or edge-interior critical point
    INTERIOR = "interior"


@dataclass(frozen=True)
class ErrorWitness:
    value: float
    location: Point
    kind: WitnessKind


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


@dataclass(frozen=True)
class ApproxTriangle:
    """Plan-view triangle carrying the linear function u x + v y + w.

    Build it with :meth:`on` so that the plane passes through the lifted
    vertices ``(p_i, f(p_i) + dz)``.
    """

    p1: Point
    p2: Point
    p3: Point
    dz: float
    u: float
    v: float
    w: float

    @classmethod
    def on(cls, q: QuadraticSurface, p1: Point, p2: Point, p3: Point, dz: float = 0.0):
        pts = [tuple(map(float, p)) for p in (p1, p2, p3)]
        sa = signed_area(*pts)
        scale = max(abs(c) for p in pts for c in p) or 1.0
        if abs(sa) <= 1e-14 * scale * scale:
            raise DegenerateTriangle(f"triangle {pts} has zero area")
        if sa < 0:
            pts[1], pts[2] = pts[2], pts[1]
        u, v, w = plane_through(q, pts, [dz, dz, dz])
        return cls(pts[0], pts[1], pts[2], float(dz), u, v, w)

    @property
    def points(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3], dtype=float)

    @property
    def area(self) -> float:
        return signed_area(self.p1, self.p2, self.p3)

    def value(self, x, y):
        return self.u * x + self.v * y + self.w

    def heights(self) -> np.ndarray:
        P = self.points
        return self.value(P[:, 0], P[:, 1])


def signed_area(p1: Point, p2: Point, p3: Point) -> float:
    return 0.5 * _cross(p2[0] - p1[0], p2[1] - p1[1], p3[0] - p1[0], p3[1] - p1[1])


def plane_through(q: QuadraticSurface, pts, offsets):
    """Coefficients (u, v, w) of the plane through (p_i, f(p_i) + offset_i)."""
    P = np.asarray(pts, dtype=float)
    z = q.evaluate(P[:, 0], P[:, 1]) + np.asarray(offsets, dtype=float)
    A = np.column_stack([P, np.ones(3)])
    u, v, w = np.linalg.solve(A, z)
    return float(u), float(v), float(w)


def chord_error(q: QuadraticSurface, p: Point, r: Point) -> ErrorWitness:
    """Error of the chord between the graph points above ``p`` and ``r``.

    The linear part of f cancels along a chord; what is left peaks at the
    midpoint with value |f0(r - p)| / 4.
    """
    dx, dy = r[0] - p[0], r[1] - p[1]
    mid = (0.5 * (p[0] + r[0]), 0.5 * (p[1] + r[1]))
    value = abs(float(q.quadratic_part(dx, dy))) / 4.0
    kind = WitnessKind.VERTEX if dx == 0 and dy == 0 else WitnessKind.EDGE
    return ErrorWitness(value, mid, kind)


def chord_error_offset(q: QuadraticSurface, p: Point, r: Point, dz: float) -> ErrorWitness:
    """Chord error when both endpoints are lifted by ``dz``.

    Along the chord d(t) = dz + t (1 - t) f0(r - p), so the maximum of |d|
    is either |dz| at the endpoints or |dz + f0(r - p)/4| at the midpoint.
    """
    dx, dy = r[0] - p[0], r[1] - p[1]
    mid_value = abs(dz + float(q.quadratic_part(dx, dy)) / 4.0)
    if mid_value > abs(dz):
        return ErrorWitness(mid_value, (0.5 * (p[0] + r[0]), 0.5 * (p[1] + r[1])), WitnessKind.EDGE)
    return ErrorWitness(abs(float(dz)), (float(p[0]), float(p[1])), WitnessKind.VERTEX)


def edge_kind(p: Point, r: Point) -> int:
    """+1 for an ascending (SW-NE) edge, -1 for descending (NW-SE), 0 if axis aligned."""
    return int(np.sign((r[0] - p[0]) * (r[1] - p[1])))


def candidate_table(q: QuadraticSurface, P, Z):
    """Signed deviation f_hat - f at every extremum candidate.

    ``P`` has shape (N, 3, 2) (triangle vertices), ``Z`` shape (N, 3)
    (heights of f_hat at the vertices). Returns ``(vals, locs)`` with shapes
    (N, 7) and (N, 7, 2); unusable candidates hold NaN.
    """
    P = np.asarray(P, dtype=float)
    Z = np.asarray(Z, dtype=float)
    n = P.shape[0]
    vals = np.full((n, N_CANDIDATES), np.nan)
    locs = np.full((n, N_CANDIDATES, 2), np.nan)

    x, y = P[..., 0], P[..., 1]
    dv = Z - q.evaluate(x, y)
    vals[:, :3] = dv
    locs[:, :3] = P

    for k, (i, j) in enumerate(EDGES):
        ex, ey = x[:, j] - x[:, i], y[:, j] - y[:, i]
        A = -q.quadratic_part(ex, ey)
        B = dv[:, j] - dv[:, i] - A
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(A != 0, -B / (2.0 * A), np.nan)
        ok = (lam > 0) & (lam < 1)
        val = A * lam * lam + B * lam + dv[:, i]
        vals[:, 3 + k] = np.where(ok, val, np.nan)
        locs[:, 3 + k, 0] = np.where(ok, x[:, i] + lam * ex, np.nan)
        locs[:, 3 + k, 1] = np.where(ok, y[:, i] + lam * ey, np.nan)

    if classify(q).is_definite:
        _interior_candidate(q, x, y, Z, vals, locs)
    return vals, locs


@np.errstate(divide="ignore", invalid="ignore")
def _interior_candidate(q, x, y, Z, vals, locs):
    """Fill slot 6 with the stationary point of f_hat - f when it is strictly inside."""
    # plane gradient from the two edge vectors at vertex 0
    e1x, e1y = x[:, 1] - x[:, 0], y[:, 1] - y[:, 0]
    e2x, e2y = x[:, 2] - x[:, 0], y[:, 2] - y[:, 0]
    z1, z2 = Z[:, 1] - Z[:, 0], Z[:, 2] - Z[:, 0]
    det = _cross(e1x, e1y, e2x, e2y)
    gu = (z1 * e2y - z2 * e1y) / det
    gv = (e1x * z2 - e2x * z1) / det
    # grad f = grad f_hat  <=>  2 M p = (gu - d, gv - e)
    disc = q.discriminant()
    rx, ry = 0.5 * (gu - q.d), 0.5 * (gv - q.e)
    sx = (q.c * rx - q.b * ry) / disc
    sy = (q.a * ry - q.b * rx) / disc
    # barycentric coordinates of the stationary point
    qx, qy = sx - x[:, 0], sy - y[:, 0]
    b1 = _cross(qx, qy, e2x, e2y) / det
    b2 = _cross(e1x, e1y, qx, qy) / det
    b0 = 1.0 - b1 - b2
    inside = (b0 > INSIDE_TOL) & (b1 > INSIDE_TOL) & (b2 > INSIDE_TOL)
    fhat = b0 * Z[:, 0] + b1 * Z[:, 1] + b2 * Z[:, 2]
    val = fhat - q.evaluate(sx, sy)
    vals[:, 6] = np.where(inside, val, np.nan)
    locs[:, 6, 0] = np.where(inside, sx, np.nan)
    locs[:, 6, 1] = np.where(inside, sy, np.nan)


def signed_extrema(q: QuadraticSurface, P, Z):
    """Max and min of f_hat - f over each closed triangle, shapes (N,) each."""
    vals, _ = candidate_table(q, P, Z)
    return np.nanmax(vals, axis=1), np.nanmin(vals, axis=1)


def triangle_error_batch(q: QuadraticSurface, P, Z) -> np.ndarray:
    hi, lo = signed_extrema(q, P, Z)
    return np.maximum(hi, -lo)


def _kind(slot: int) -> WitnessKind:
    if slot < 3:
        return WitnessKind.VERTEX
    if slot < 6:
        return WitnessKind.EDGE
    return WitnessKind.INTERIOR


def triangle_error(q: QuadraticSurface, t: ApproxTriangle) -> ErrorWitness:
    """Exact max |f_hat - f| over the closed triangle ``t``.

    Ties between candidates go to the first one in the order vertices,
    edges (p1p2, p2p3, p3p1), interior.
    """
    if t.area <= 0:
        raise DegenerateTriangle("triangle has zero area")
    P = t.points[None]
    vals, locs = candidate_table(q, P, t.heights()[None])
    absvals = np.abs(vals[0])
    best = np.nanmax(absvals)
    slot = int(np.flatnonzero(absvals >= best - TIE_RTOL * max(1.0, best))[0])
    loc = locs[0, slot]
    return ErrorWitness(float(absvals[slot]), (float(loc[0]), float(loc[1])), _kind(slot))


def _barycentric_grid(n: int):
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = i + j <= n
    return i[keep] / n, j[keep] / n


def sampled_error_batch(q: QuadraticSurface, P, Z, n: int = 16, refine: bool = True, mask=None):
    """Sampled max |f_hat - f| per triangle on a barycentric grid.

    ``mask(x, y) -> bool array`` restricts sampling to a sub-domain (used to
    clip triangles to a region); triangles with no admissible sample get -inf.
    One refinement pass re-samples an (n+1)^2 grid over the cell around each
    triangle's best sample.
    """
    if n < 2:
        raise ValueError("sampling resolution must be at least 2")
    P = np.asarray(P, dtype=float)
    Z = np.asarray(Z, dtype=float)
    n_tri = P.shape[0]
    o = P[:, 0]
    e1 = P[:, 1] - o
    e2 = P[:, 2] - o
    # plane gradient for direct evaluation of f_hat
    det = _cross(e1[:, 0], e1[:, 1], e2[:, 0], e2[:, 1])
    z1, z2 = Z[:, 1] - Z[:, 0], Z[:, 2] - Z[:, 0]
    gu = (z1 * e2[:, 1] - z2 * e1[:, 1]) / det
    gv = (e1[:, 0] * z2 - e2[:, 0] * z1) / det

    def deviation(al, be):
        px = o[:, None, 0] + al * e1[:, None, 0] + be * e2[:, None, 0]
        py = o[:, None, 1] + al * e1[:, None, 1] + be * e2[:, None, 1]
        fhat = Z[:, None, 0] + gu[:, None] * (px - o[:, None, 0]) + gv[:, None] * (py - o[:, None, 1])
        err = np.abs(fhat - q.evaluate(px, py))
        if mask is not None:
            err = np.where(mask(px, py), err, -np.inf)
        return err

    al, be = _barycentric_grid(n)
    err = deviation(np.broadcast_to(al, (n_tri, al.size)), np.broadcast_to(be, (n_tri, be.size)))
    best_idx = np.argmax(err, axis=1)
    best = err[np.arange(n_tri), best_idx]
    if not refine:
        return best

    h = 1.0 / n
    a0, b0 = al[best_idx], be[best_idx]
    s = np.linspace(-h, h, n + 1)
    da, db = np.meshgrid(s, s, indexing="ij")
    ra = a0[:, None] + da.ravel()[None]
    rb = b0[:, None] + db.ravel()[None]
    ok = (ra >= 0) & (rb >= 0) & (ra + rb <= 1)
    ra = np.where(ok, ra, a0[:, None])
    rb = np.where(ok, rb, b0[:, None])
    err2 = deviation(ra, rb)
    return np.maximum(best, err2.max(axis=1))


def sampled_triangle_error(q: QuadraticSurface, t: ApproxTriangle, n: int = 200, refine: bool = True) -> float:
    """Grid-sampled counterpart of :func:`triangle_error`, used as a cross-check."""
    return float(sampled_error_batch(q, t.points[None], t.heights()[None], n=n, refine=refine)[0])
