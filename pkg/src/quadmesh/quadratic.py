"""Bivariate quadratics and the vertical-distance preserving affine maps between them.

A quadratic is stored with the cross-term convention

    f(x, y) = a x^2 + 2 b x y + c y^2 + d x + e y + g

so that its symmetric form matrix is [[a, b], [b, c]].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .exceptions import DegenerateSurface

Point = Tuple[float, float]

#: relative threshold below which |ac - b^2| counts as zero
CLASSIFY_RTOL = 1e-12


class SurfaceClass(enum.Enum):
    POSITIVE_DEFINITE = "positive_definite"
    NEGATIVE_DEFINITE = "negative_definite"
    INDEFINITE = "indefinite"
    DEGENERATE = "degenerate"

    @property
    def is_definite(self) -> bool:
        return self in (SurfaceClass.POSITIVE_DEFINITE, SurfaceClass.NEGATIVE_DEFINITE)


@dataclass(frozen=True)
class QuadraticSurface:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0
    g: float = 0.0

    @classmethod
    def from_coefficients(cls, coeffs) -> "QuadraticSurface":
        coeffs = tuple(float(v) for v in coeffs)
        if len(coeffs) != 6:
            raise ValueError(f"expected 6 coefficients (a, b, c, d, e, g), got {len(coeffs)}")
        return cls(*coeffs)

    @property
    def coefficients(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e, self.g)

    @property
    def form_matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b, self.c]], dtype=float)

    def discriminant(self) -> float:
        return self.a * self.c - self.b * self.b

    def __call__(self, x, y):
        return self.evaluate(x, y)

    def evaluate(self, x, y):
        """Value of f at (x, y); broadcasts over numpy arrays."""
        return (
            self.a * x * x
            + 2.0 * self.b * x * y
            + self.c * y * y
            + self.d * x
            + self.e * y
            + self.g
        )

    def quadratic_part(self, x, y):
        """The homogeneous quadratic part a x^2 + 2b xy + c y^2."""
        return self.a * x * x + 2.0 * self.b * x * y + self.c * y * y

    def gradient(self, x, y):
        return (
            2.0 * self.a * x + 2.0 * self.b * y + self.d,
            2.0 * self.b * x + 2.0 * self.c * y + self.e,
        )

    def pure(self) -> "QuadraticSurface":
        """Same quadratic with the linear part dropped."""
        return QuadraticSurface(self.a, self.b, self.c)


def classify(q: QuadraticSurface) -> SurfaceClass:
    disc = q.discriminant()
    scale = max(1.0, q.a * q.a + q.b * q.b + q.c * q.c)
    if abs(disc) <= CLASSIFY_RTOL * scale:
        return SurfaceClass.DEGENERATE
    if disc < 0:
        return SurfaceClass.INDEFINITE
    # a != 0 for any definite form
    return SurfaceClass.POSITIVE_DEFINITE if q.a > 0 else SurfaceClass.NEGATIVE_DEFINITE


@dataclass(frozen=True)
class SurfaceTransform:
    """Affine map of 3-space that keeps vertical lines vertical.

    (x, y, z) -> (L @ (x, y) + t,  z + u x + v y + w)

    where (x, y) in the height update are the *input* plane coordinates.
    Vertical distances between points on one vertical line are unchanged.
    """

    plane: tuple = ((1.0, 0.0), (0.0, 1.0))
    offset: Point = (0.0, 0.0)
    u: float = 0.0
    v: float = 0.0
    w: float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.plane, dtype=float)

    @property
    def area_scale(self) -> float:
        return abs(float(np.linalg.det(self.matrix)))

    @classmethod
    def from_parts(cls, L, t=(0.0, 0.0), u=0.0, v=0.0, w=0.0) -> "SurfaceTransform":
        L = np.asarray(L, dtype=float)
        return cls(
            plane=(tuple(map(float, L[0])), tuple(map(float, L[1]))),
            offset=(float(t[0]), float(t[1])),
            u=float(u),
            v=float(v),
            w=float(w),
        )

    def apply_plane(self, x, y):
        (l00, l01), (l10, l11) = self.plane
        return (l00 * x + l01 * y + self.offset[0], l10 * x + l11 * y + self.offset[1])

    def apply(self, x, y, z):
        xp, yp = self.apply_plane(x, y)
        return xp, yp, z + self.u * x + self.v * y + self.w

    def __call__(self, x, y, z):
        return self.apply(x, y, z)

    def compose(self, first: "SurfaceTransform") -> "SurfaceTransform":
        """Return ``self ∘ first`` (apply ``first``, then ``self``)."""
        L1, L2 = first.matrix, self.matrix
        t1, t2 = np.array(first.offset), np.array(self.offset)
        s1, s2 = np.array([first.u, first.v]), np.array([self.u, self.v])
        s = s1 + L1.T @ s2
        return SurfaceTransform.from_parts(
            L2 @ L1, L2 @ t1 + t2, s[0], s[1], first.w + self.w + float(s2 @ t1)
        )

    def inverse(self) -> "SurfaceTransform":
        L = self.matrix
        Linv = np.linalg.inv(L)
        t = np.array(self.offset)
        s = np.array([self.u, self.v])
        s_inv = -Linv.T @ s
        return SurfaceTransform.from_parts(
            Linv, -Linv @ t, s_inv[0], s_inv[1], -self.w + float(s @ Linv @ t)
        )

    def push_surface(self, q: QuadraticSurface) -> QuadraticSurface:
        """The quadratic whose graph is the image of the graph of ``q``."""
        inv = self.inverse()
        Li = inv.matrix
        M = Li.T @ q.form_matrix @ Li
        t = np.array(inv.offset)
        lin = np.array([q.d, q.e])
        # f(L^-1 X + t_inv) + (u, v) . (L^-1 X + t_inv) + w, in X
        s = np.array([self.u, self.v])
        grad = 2.0 * (Li.T @ q.form_matrix @ t) + Li.T @ (lin + s)
        const = float(q.evaluate(t[0], t[1]) + s @ t + self.w)
        return QuadraticSurface(
            float(M[0, 0]), float(M[0, 1]), float(M[1, 1]), float(grad[0]), float(grad[1]), const
        )


IDENTITY = SurfaceTransform()


def graph_automorphism(q: QuadraticSurface, p1: Point, p2: Point) -> SurfaceTransform:
    """Map the graph of ``q`` onto itself, carrying the point above ``p1`` to the point above ``p2``.

    The plane part is the translation by ``p2 - p1``; the height gets a
    shear so that graph points land on graph points.
    """
    dx = float(p2[0]) - float(p1[0])
    dy = float(p2[1]) - float(p1[1])
    return SurfaceTransform(
        offset=(dx, dy),
        u=2.0 * q.a * dx + 2.0 * q.b * dy,
        v=2.0 * q.b * dx + 2.0 * q.c * dy,
        w=float(q.evaluate(dx, dy)) - q.g,
    )


@dataclass(frozen=True)
class NormalForm:
    """Canonical representative of a quadratic plus the map that reaches it.

    ``sigma1 x^2 + sigma2 y^2`` in general; ``2 x y`` when ``saddle_xy`` is set.
    """

    sigma1: int
    sigma2: int
    transform: SurfaceTransform
    saddle_xy: bool = False

    @property
    def canonical(self) -> QuadraticSurface:
        if self.saddle_xy:
            return QuadraticSurface(b=1.0)
        return QuadraticSurface(a=float(self.sigma1), c=float(self.sigma2))

    @property
    def frame(self) -> str:
        if self.saddle_xy:
            return "2xy"
        return {(1, 1): "x^2+y^2", (-1, -1): "-x^2-y^2", (1, -1): "x^2-y^2"}[
            (self.sigma1, self.sigma2)
        ]

    @property
    def area_scale(self) -> float:
        return self.transform.area_scale


def principal_axes(a: float, b: float, c: float):
    """Closed-form eigen-decomposition of [[a, b], [b, c]].

    Returns (theta, lam1, lam2) with the eigenvectors (cos, sin) and
    (-sin, cos) of the rotation angle theta.
    """
    theta = 0.5 * math.atan2(2.0 * b, a - c)
    ct, st = math.cos(theta), math.sin(theta)
    lam1 = a * ct * ct + 2.0 * b * st * ct + c * st * st
    lam2 = a * st * st - 2.0 * b * st * ct + c * ct * ct
    return theta, lam1, lam2


def _rotation(theta: float) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    return np.array([[ct, -st], [st, ct]])


def normalize(q: QuadraticSurface, xy_frame: bool = False) -> NormalForm:
    """Reduce ``q`` to ``±x^2 ± y^2`` (or ``2xy`` for saddles with ``xy_frame``).

    The linear part is removed by a vertical shear, the form is rotated to
    its principal axes and each axis is scaled by the root of its
    eigenvalue, so plan-view areas grow by ``sqrt(|ac - b^2|)``.
    """
    cls = classify(q)
    if cls is SurfaceClass.DEGENERATE:
        raise DegenerateSurface(
            f"ac - b^2 = {q.discriminant():g}: semidefinite (parabolic cylinder) "
            "or linear functions have no normal form"
        )
    shear = SurfaceTransform(u=-q.d, v=-q.e, w=-q.g)

    theta, lam1, lam2 = principal_axes(q.a, q.b, q.c)
    if lam1 < 0 < lam2:
        # keep the positive eigenvalue first so saddles read x^2 - y^2
        theta += 0.5 * math.pi
        lam1, lam2 = lam2, lam1
    R = _rotation(theta)
    scale = np.diag([math.sqrt(abs(lam1)), math.sqrt(abs(lam2))])
    L = scale @ R.T
    if xy_frame and cls is SurfaceClass.INDEFINITE:
        # X^2 - Y^2 = 2 u v with (u, v) = ((X - Y), (X + Y)) / sqrt(2)
        L = _rotation(math.pi / 4) @ L
    plane = SurfaceTransform.from_parts(L)
    transform = plane.compose(shear)
    sigma1 = 1 if lam1 > 0 else -1
    sigma2 = 1 if lam2 > 0 else -1
    return NormalForm(
        sigma1, sigma2, transform, saddle_xy=bool(xy_frame and cls is SurfaceClass.INDEFINITE)
    )
