"""Closed-form largest-area triangles under a vertical error budget.

Saddle triangles live in the frame f = 2xy, convex ones in f = x^2 + y^2
(or -x^2 - y^2 for concave inputs). Every constructor returns the triangle
together with the uniform vertex offset it was built for; tiling the
plane with it and its 180 degree rotation gives density 1 / area.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .exceptions import DegenerateSurface, InvalidShapeParam
from .quadratic import QuadraticSurface, SurfaceClass, classify
from .vertical_error import ApproxTriangle, check_eps

SQRT3 = math.sqrt(3.0)
SQRT5 = math.sqrt(5.0)

SADDLE = QuadraticSurface(b=1.0)
CONVEX = QuadraticSurface(a=1.0, c=1.0)
CONCAVE = QuadraticSurface(a=-1.0, c=-1.0)

_FRAMES = {"2xy": SADDLE, "x^2+y^2": CONVEX, "-x^2-y^2": CONCAVE}


class Mode(enum.Enum):
    INTERPOLATING = "interp"
    UNIFORM_OFFSET = "offset"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, cls):
            return value
        aliases = {
            "interp": cls.INTERPOLATING,
            "interpolating": cls.INTERPOLATING,
            "offset": cls.UNIFORM_OFFSET,
            "uniform_offset": cls.UNIFORM_OFFSET,
            "uniformoffset": cls.UNIFORM_OFFSET,
        }
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown mode {value!r}; use 'interp' or 'offset'") from None


#: density * eps / sqrt|ac - b^2| for each (surface kind, mode)
DENSITY_CONSTANTS = {
    ("saddle", Mode.UNIFORM_OFFSET): SQRT3 / 4.0,
    ("saddle", Mode.INTERPOLATING): 1.0 / SQRT5,
    ("convex", Mode.UNIFORM_OFFSET): 2.0 / math.sqrt(27.0),
    ("convex", Mode.INTERPOLATING): 4.0 / math.sqrt(27.0),
}


@dataclass(frozen=True)
class OptimalResult:
    triangle: ApproxTriangle
    dz: float
    area: float
    density: float
    canonical_frame: str
    eps: float

    @property
    def surface(self) -> QuadraticSurface:
        return _FRAMES[self.canonical_frame]

    @property
    def mode(self) -> Mode:
        return Mode.INTERPOLATING if self.dz == 0 else Mode.UNIFORM_OFFSET


def _result(frame: str, eps: float, p2, p3, dz: float, area: float) -> OptimalResult:
    tri = ApproxTriangle.on(_FRAMES[frame], (0.0, 0.0), p2, p3, dz)
    return OptimalResult(tri, float(dz), area, 1.0 / area, frame, eps)


def _check_m(m: float) -> float:
    m = float(m)
    if m == 0 or not math.isfinite(m):
        raise InvalidShapeParam(f"shape parameter must be finite and nonzero, got {m!r}")
    return m


def pseudo_euclidean(p, m: float):
    """Area-preserving stretch (x, y) -> (m x, y / m); leaves 2xy invariant."""
    return (p[0] * m, p[1] / m)


def saddle_interpolating(eps: float, m: float = 1.0) -> OptimalResult:
    """Largest triangle whose three chords on f = 2xy all have error ``eps``.

    p1p2 and p1p3 are ascending, p2p3 descending; area eps * sqrt(5).
    """
    eps = check_eps(eps)
    m = _check_m(m)
    s = math.sqrt(eps / 2.0)
    p2 = pseudo_euclidean((s * (SQRT5 + 1.0), s * (SQRT5 - 1.0)), m)
    p3 = pseudo_euclidean((s * (SQRT5 - 1.0), s * (SQRT5 + 1.0)), m)
    return _result("2xy", eps, p2, p3, 0.0, eps * SQRT5)


def offset_vertex(eps: float, dz: float):
    """First-quadrant vertex (x2, y2) of the symmetric offset triangle.

    Returned for the mirrored configuration, where the two edges at the
    origin are descending: x2 y2 = 2 (eps + dz) and (x2 - y2)^2 = 2 (eps - dz).
    """
    r = math.sqrt(0.5)
    a = math.sqrt(5.0 * eps + 3.0 * dz)
    b = math.sqrt(eps - dz)
    return r * (a + b), r * (a - b)


def offset_area(eps: float, dz: float) -> float:
    """Area of the symmetric offset triangle for a given uniform offset."""
    return math.sqrt(5.0 * eps + 3.0 * dz) * math.sqrt(eps - dz)


def saddle_offset(eps: float, m: float = 1.0) -> OptimalResult:
    """Largest triangle on f = 2xy when all vertices sit ``eps/3`` below the surface.

    The two edges at p1 are descending and dip below the surface, the third
    edge p2p3 is ascending and bulges above it. Reflect with
    :func:`mirror` for the first-quadrant twin with offset +eps/3.
    At m = 1 the triangle is equilateral with squared side 16 eps / 3.
    """
    eps = check_eps(eps)
    m = _check_m(m)
    dz = -eps / 3.0
    x2, y2 = offset_vertex(eps, dz)
    p2 = pseudo_euclidean((y2, -x2), m)
    p3 = pseudo_euclidean((x2, -y2), m)
    return _result("2xy", eps, p2, p3, dz, 4.0 * eps / SQRT3)


def saddle_ruled(eps: float) -> OptimalResult:
    """Best interpolating triangle whose base p1p2 lies on the ruling y = 0.

    Both slanted chords are tight: x3 y3 = 2 eps and (x3 - L) y3 = -2 eps,
    so L y3 = 4 eps and the area is 2 eps whatever the base length L.
    The isosceles representative uses L = 2 sqrt(eps).
    """
    eps = check_eps(eps)
    base = 2.0 * math.sqrt(eps)
    apex = (0.5 * base, 4.0 * eps / base)
    return _result("2xy", eps, (base, 0.0), apex, 0.0, 2.0 * eps)


def convex_optimal(eps: float, mode=Mode.INTERPOLATING, angle: float = 0.0, concave: bool = False) -> OptimalResult:
    """Equilateral triangle inscribed in the circle whose squared radius is the budget.

    Interpolating: radius sqrt(eps). Offset: an interpolating triangle for
    budget 2 eps shifted down by eps (up for concave surfaces).
    """
    eps = check_eps(eps)
    mode = Mode.parse(mode)
    if mode is Mode.INTERPOLATING:
        r2, dz = eps, 0.0
    else:
        r2, dz = 2.0 * eps, -eps
    if concave:
        dz = -dz
    r = math.sqrt(r2)
    pts = [
        (r * math.cos(angle + k * 2.0 * math.pi / 3.0), r * math.sin(angle + k * 2.0 * math.pi / 3.0))
        for k in range(3)
    ]
    # translate so p1 sits at the origin; errors are translation invariant
    p2 = (pts[1][0] - pts[0][0], pts[1][1] - pts[0][1])
    p3 = (pts[2][0] - pts[0][0], pts[2][1] - pts[0][1])
    return _result("-x^2-y^2" if concave else "x^2+y^2", eps, p2, p3, dz, 0.75 * SQRT3 * r2)


def mirror(result: OptimalResult) -> OptimalResult:
    """Reflect a saddle result by (x, y) -> (x, -y); swaps ascending/descending and flips dz."""
    if result.canonical_frame != "2xy":
        raise ValueError("mirror applies to saddle results only")
    t = result.triangle
    p2 = (t.p2[0], -t.p2[1])
    p3 = (t.p3[0], -t.p3[1])
    tri = ApproxTriangle.on(SADDLE, (0.0, 0.0), p2, p3, -result.dz)
    return replace(result, triangle=tri, dz=-result.dz)


def _kind(q: QuadraticSurface) -> str:
    cls = classify(q)
    if cls is SurfaceClass.DEGENERATE:
        raise DegenerateSurface(
            "ac - b^2 = 0: semidefinite (parabolic cylinder) and linear surfaces are not supported"
        )
    return "saddle" if cls is SurfaceClass.INDEFINITE else "convex"


def theoretical_density(q: QuadraticSurface, eps: float, mode) -> float:
    """Asymptotic triangles per unit area of the optimal grid for ``q``."""
    eps = check_eps(eps)
    const = DENSITY_CONSTANTS[(_kind(q), Mode.parse(mode))]
    return const / eps * math.sqrt(abs(q.discriminant()))


def optimal_for(q: QuadraticSurface, eps: float, mode, m: float = 1.0) -> OptimalResult:
    """Pick the canonical optimal triangle matching the class of ``q``."""
    mode = Mode.parse(mode)
    cls = classify(q)
    if _kind(q) == "saddle":
        return saddle_interpolating(eps, m) if mode is Mode.INTERPOLATING else saddle_offset(eps, m)
    return convex_optimal(eps, mode, concave=cls is SurfaceClass.NEGATIVE_DEFINITE)
