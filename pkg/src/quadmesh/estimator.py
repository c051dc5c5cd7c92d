"""scikit-learn style wrapper: fit a quadratic, predict with its optimal mesh."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .optimal import Mode, _check_m, optimal_for, theoretical_density
from .quadratic import QuadraticSurface, classify, normalize
from .tiling import Region, _Lattice, tile_region
from .vertical_error import check_eps


def _design(X):
    x, y = X[:, 0], X[:, 1]
    return np.column_stack([x * x, 2.0 * x * y, y * y, x, y, np.ones_like(x)])


class PiecewiseLinearApproximator(RegressorMixin, BaseEstimator):
    """Piecewise-linear stand-in for a quadratic with vertical error at most ``eps``.

    ``fit`` takes plan-view points X (n, 2) and heights y and fits
    f = a x^2 + 2 b x y + c y^2 + d x + e y + g by least squares, unless
    ``coefficients`` is given, in which case the data is only validated.
    ``predict`` interpolates f + dz linearly over the optimal triangle
    lattice, so |predict(X) - f(X)| <= eps everywhere.

    Parameters
    ----------
    eps : float
        Vertical error budget.
    mode : {"offset", "interp"}
        Uniform vertex offset or interpolating vertices.
    m : float
        Saddle shape parameter; ignored for definite surfaces.
    translate : tuple
        Lattice shift in the canonical frame.
    coefficients : tuple or None
        Fixed (a, b, c, d, e, g).
    """

    def __init__(self, eps=1.0, mode="offset", m=1.0, translate=(0.0, 0.0), coefficients=None):
        self.eps = eps
        self.mode = mode
        self.m = m
        self.translate = translate
        self.coefficients = coefficients

    def _validate_params(self):
        check_eps(self.eps)
        Mode.parse(self.mode)
        _check_m(self.m)
        if len(self.translate) != 2:
            raise ValueError(f"translate must be a pair, got {self.translate!r}")

    def fit(self, X, y=None):
        self._validate_params()
        if self.coefficients is None:
            if y is None:
                raise ValueError("y is required when coefficients are not given")
            X, y = check_X_y(X, y, y_numeric=True)
            if X.shape[1] != 2:
                raise ValueError(f"X must have 2 columns (x, y), got {X.shape[1]}")
            if X.shape[0] < 6:
                raise ValueError(f"need at least 6 samples to fit a quadratic, got {X.shape[0]}")
            coef, *_ = np.linalg.lstsq(_design(X), y, rcond=None)
            surface = QuadraticSurface.from_coefficients(coef)
        else:
            X = check_array(X)
            surface = QuadraticSurface.from_coefficients(self.coefficients)
        self.n_features_in_ = 2
        self.surface_ = surface
        self.surface_class_ = classify(surface)
        self.normal_form_ = normalize(surface, xy_frame=True)
        self.optimal_ = optimal_for(surface, self.eps, self.mode, self.m)
        self.density_ = theoretical_density(surface, self.eps, self.mode)
        self._lattice = _Lattice(surface, self.optimal_, tuple(self.translate))
        return self

    def predict(self, X):
        check_is_fitted(self, "optimal_")
        X = check_array(X)
        if X.shape[1] != 2:
            raise ValueError(f"X must have 2 columns (x, y), got {X.shape[1]}")
        lat = self._lattice
        C = np.column_stack(lat.plane.apply_plane(X[:, 0], X[:, 1]))
        ab = np.linalg.solve(lat.B, (C - lat.origin).T).T
        ij = np.floor(ab).astype(int)
        fa, fb = (ab - ij).T
        i, j = ij.T
        lower = fa + fb <= 1.0
        # T: (i, j), (i+1, j), (i, j+1); T': (i+1, j+1), (i, j+1), (i+1, j)
        keys = np.where(
            lower[:, None, None],
            np.stack([np.column_stack([i, j]), np.column_stack([i + 1, j]), np.column_stack([i, j + 1])], axis=1),
            np.stack([np.column_stack([i + 1, j + 1]), np.column_stack([i, j + 1]), np.column_stack([i + 1, j])], axis=1),
        )
        w = np.where(
            lower[:, None],
            np.column_stack([1.0 - fa - fb, fa, fb]),
            np.column_stack([fa + fb - 1.0, 1.0 - fa, 1.0 - fb]),
        )
        P = lat.original(keys[..., 0], keys[..., 1])
        z = self.surface_.evaluate(P[..., 0], P[..., 1]) + lat.dz
        return np.sum(w * z, axis=1)

    def mesh(self, region, n_jobs=1):
        """Explicit triangle mesh covering ``region`` (a Region or xmin, ymin, xmax, ymax)."""
        check_is_fitted(self, "optimal_")
        if not isinstance(region, Region):
            region = Region(*region)
        return tile_region(self.surface_, self.optimal_, region, translate=tuple(self.translate), n_jobs=n_jobs)
