"""Lattice meshes built from one optimal triangle and its 180 degree rotation."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import EmptyRegion
from .optimal import OptimalResult, theoretical_density
from .quadratic import Point, QuadraticSurface, normalize
from .vertical_error import sampled_error_batch, triangle_error_batch

# lattice offsets (di, dj) of the three vertices of T and of T' within cell (i, j)
_T = ((0, 0), (1, 0), (0, 1))
_T_PRIME = ((1, 1), (0, 1), (1, 0))


@dataclass(frozen=True)
class Region:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        vals = (self.xmin, self.ymin, self.xmax, self.ymax)
        if not all(np.isfinite(vals)):
            raise ValueError(f"region bounds must be finite, got {vals}")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"empty region {vals}: need xmax > xmin and ymax > ymin")

    @classmethod
    def square(cls, side: float, center: Point = (0.0, 0.0)) -> "Region":
        h = 0.5 * side
        return cls(center[0] - h, center[1] - h, center[0] + h, center[1] + h)

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    @property
    def corners(self) -> np.ndarray:
        return np.array(
            [[self.xmin, self.ymin], [self.xmax, self.ymin], [self.xmax, self.ymax], [self.xmin, self.ymax]]
        )

    def contains(self, x, y):
        return (x >= self.xmin) & (x <= self.xmax) & (y >= self.ymin) & (y <= self.ymax)

    def as_tuple(self) -> tuple:
        return (self.xmin, self.ymin, self.xmax, self.ymax)


@dataclass(frozen=True, eq=False)
class MeshPatch:
    """Indexed triangle mesh over a region, in original coordinates.

    ``keys[k]`` is the integer lattice position of vertex ``k``; ``cells[t]``
    is ``(i, j, parity)`` of triangle ``t`` with parity 0 for T and 1 for T'.
    ``lattice_origin`` and ``basis`` are in the canonical frame.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    keys: np.ndarray
    cells: np.ndarray
    lattice_origin: Point
    basis: tuple
    region: Region
    dz: float

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])

    def triangle_points(self) -> np.ndarray:
        return self.vertices[self.triangles][..., :2]

    def triangle_heights(self) -> np.ndarray:
        return self.vertices[self.triangles][..., 2]


@dataclass(frozen=True)
class DensityReport:
    triangle_count: int
    region_area: float
    empirical_density: float
    theoretical_density: float
    sampled_max_error: float
    worst_triangle: int = -1


def triangles_meet_rect(P: np.ndarray, region: Region) -> np.ndarray:
    """Separating-axis test of triangles (N, 3, 2) against the closed region."""
    x, y = P[..., 0], P[..., 1]
    hit = (
        (x.max(axis=1) >= region.xmin)
        & (x.min(axis=1) <= region.xmax)
        & (y.max(axis=1) >= region.ymin)
        & (y.min(axis=1) <= region.ymax)
    )
    C = region.corners
    for i, j in ((0, 1), (1, 2), (2, 0)):
        nx = -(y[:, j] - y[:, i])
        ny = x[:, j] - x[:, i]
        tri = nx[:, None] * x + ny[:, None] * y
        rect = nx[:, None] * C[None, :, 0] + ny[:, None] * C[None, :, 1]
        hit &= (tri.max(axis=1) >= rect.min(axis=1)) & (tri.min(axis=1) <= rect.max(axis=1))
    return hit


class _Lattice:
    def __init__(self, q: QuadraticSurface, result: OptimalResult, translate: Point):
        nf = normalize(q, xy_frame=True)
        if nf.frame != result.canonical_frame:
            raise ValueError(
                f"optimal triangle was built for f = {result.canonical_frame}, "
                f"but the surface normalizes to {nf.frame}"
            )
        t = result.triangle
        self.q = q
        self.dz = result.dz
        self.origin = np.array(t.p1) + np.asarray(translate, dtype=float)
        self.B = np.column_stack([np.subtract(t.p2, t.p1), np.subtract(t.p3, t.p1)])
        self.plane = nf.transform
        inv = nf.transform.inverse()
        self.to_orig = inv.matrix
        self.to_orig_t = np.array(inv.offset)

    def original(self, i, j):
        P = self.origin + np.multiply.outer(i, self.B[:, 0]) + np.multiply.outer(j, self.B[:, 1])
        return P @ self.to_orig.T + self.to_orig_t

    def index_range(self, region: Region):
        Xc = np.column_stack(self.plane.apply_plane(region.corners[:, 0], region.corners[:, 1]))
        ab = np.linalg.solve(self.B, (Xc - self.origin).T)
        lo = np.floor(ab.min(axis=1)).astype(int) - 1
        hi = np.floor(ab.max(axis=1)).astype(int) + 1
        return lo, hi

    def row(self, j: int, i_lo: int, i_hi: int, region: Region):
        """Kept (i, j, parity) triples of one lattice row, in emission order."""
        i = np.arange(i_lo, i_hi + 1)
        out = []
        for parity, shape in enumerate((_T, _T_PRIME)):
            P = np.stack([self.original(i + di, np.full_like(i, j + dj)) for di, dj in shape], axis=1)
            keep = triangles_meet_rect(P, region)
            out.append(np.column_stack([i, np.full_like(i, j), np.full_like(i, parity)])[keep])
        cells = np.concatenate(out)
        # T before T' within a cell, cells in increasing i
        order = np.lexsort((cells[:, 2], cells[:, 0]))
        return cells[order]


def tile_region(
    q: QuadraticSurface,
    result: OptimalResult,
    region: Region,
    translate: Point = (0.0, 0.0),
    n_jobs: int = 1,
) -> MeshPatch:
    """Cover ``region`` with lattice copies of the optimal triangle.

    Cells are o + i e1 + j e2 with e1 = p2 - p1, e2 = p3 - p1 in the
    canonical frame (``translate`` shifts o there too). Each cell holds T and
    its point reflection T'; triangles are kept whole when they meet the
    region. Heights are f(x, y) + dz in original coordinates, so neighbouring
    triangles share vertices exactly.
    """
    lat = _Lattice(q, result, translate)
    (i_lo, j_lo), (i_hi, j_hi) = lat.index_range(region)
    rows = range(j_lo, j_hi + 1)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda j: lat.row(j, i_lo, i_hi, region), rows))
    else:
        parts = [lat.row(j, i_lo, i_hi, region) for j in rows]
    cells = np.concatenate(parts) if parts else np.empty((0, 3), dtype=int)
    if cells.shape[0] == 0:
        raise EmptyRegion(f"no lattice triangle meets region {region.as_tuple()}")

    offsets = np.array([_T, _T_PRIME])  # (2, 3, 2)
    corner_keys = cells[:, None, :2] + offsets[cells[:, 2]]  # (M, 3, 2)
    flat = corner_keys.reshape(-1, 2)
    uniq, first, inverse = np.unique(flat, axis=0, return_index=True, return_inverse=True)
    # number vertices by first appearance in emission order
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    triangles = rank[inverse.ravel()].reshape(-1, 3)
    keys = uniq[order]
    if np.linalg.det(lat.B) * np.linalg.det(lat.to_orig) < 0:
        # the map back to original coordinates reflects; keep plan view counterclockwise
        triangles = triangles[:, [0, 2, 1]]

    xy = lat.original(keys[:, 0], keys[:, 1])
    z = q.evaluate(xy[:, 0], xy[:, 1]) + lat.dz
    vertices = np.column_stack([xy, z])
    return MeshPatch(
        vertices=vertices,
        triangles=triangles,
        keys=keys,
        cells=cells,
        lattice_origin=(float(lat.origin[0]), float(lat.origin[1])),
        basis=(tuple(map(float, lat.B[:, 0])), tuple(map(float, lat.B[:, 1]))),
        region=region,
        dz=float(lat.dz),
    )


def exact_errors(q: QuadraticSurface, patch: MeshPatch) -> np.ndarray:
    """Exact max vertical error of every triangle (unclipped)."""
    return triangle_error_batch(q, patch.triangle_points(), patch.triangle_heights())


def measure(q: QuadraticSurface, patch: MeshPatch, eps: float, mode, samples_per_triangle: int = 16) -> DensityReport:
    """Count, density and sampled error of a patch against its region."""
    if patch.n_triangles == 0:
        raise EmptyRegion("patch has no triangles")
    region = patch.region
    P = patch.triangle_points()
    count = int(triangles_meet_rect(P, region).sum())
    errs = sampled_error_batch(q, P, patch.triangle_heights(), n=samples_per_triangle, mask=region.contains)
    worst = int(np.argmax(errs))
    return DensityReport(
        triangle_count=count,
        region_area=region.area,
        empirical_density=count / region.area,
        theoretical_density=theoretical_density(q, eps, mode),
        sampled_max_error=float(max(errs[worst], 0.0)),
        worst_triangle=worst,
    )


def interior_vertices(patch: MeshPatch, region: Region = None) -> np.ndarray:
    """Mask of vertices lying in the closed region.

    Every triangle around such a vertex meets the region, so all six are in
    the patch and the vertex is interior to the mesh.
    """
    region = patch.region if region is None else region
    return region.contains(patch.vertices[:, 0], patch.vertices[:, 1])


def vertex_density(patch: MeshPatch, region: Region = None) -> float:
    """Mesh vertices per unit area of the region."""
    region = patch.region if region is None else region
    if patch.n_triangles == 0:
        raise EmptyRegion("patch has no triangles")
    return float(interior_vertices(patch, region).sum()) / region.area
