"""Bivariate Hermite series sketch with Spearman and Kendall estimators."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import EmptySketchError, SketchError
from .hermite_basis import build_basis_tables, hermite_function_values, lower_integral_values
from .moments import RunningMoments
from .univariate import (
    BATCH_CHUNK,
    DEFAULT_ORDER,
    PDF_FLOOR,
    SketchConfig,
    UnivariateSketch,
    clip_probability,
    combine_counts,
    fold_in,
)


def _check_pairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise SketchError("bivariate data must have shape (n, 2)")
    if arr.shape[0] == 0:
        raise SketchError("no observations given")
    if not np.all(np.isfinite(arr)):
        raise SketchError("observations must be finite")
    return arr


class BivariateSketch:
    """Hermite series estimator of a bivariate density.

    Holds the joint coefficient matrix plus the two marginal coefficient
    vectors, all built from the same standardized stream, which is what the
    rank-correlation forms need.
    """

    def __init__(self, order_n: int = DEFAULT_ORDER, standardize: bool = True,
                 lam: Optional[float] = None):
        self.config = SketchConfig(order_n, bool(standardize), lam)
        size = self.config.order_n + 1
        self.coeff_matrix = np.zeros((size, size))
        self.marginal_x = np.zeros(size)
        self.marginal_y = np.zeros(size)
        self.moments_x = RunningMoments(lam=lam)
        self.moments_y = RunningMoments(lam=lam)
        self.obs_count = 0

    order_n = property(lambda self: self.config.order_n)
    standardize = property(lambda self: self.config.standardize)
    lam = property(lambda self: self.config.lam)

    def __repr__(self):
        return (f"BivariateSketch(order_n={self.order_n}, standardize={self.standardize}, "
                f"lam={self.lam}, obs_count={self.obs_count})")

    def copy(self) -> "BivariateSketch":
        other = BivariateSketch(self.order_n, self.standardize, self.lam)
        other.coeff_matrix = self.coeff_matrix.copy()
        other.marginal_x = self.marginal_x.copy()
        other.marginal_y = self.marginal_y.copy()
        other.moments_x = self.moments_x.copy()
        other.moments_y = self.moments_y.copy()
        other.obs_count = self.obs_count
        return other

    def _standardizer(self, moments: RunningMoments) -> tuple[float, float]:
        if not self.standardize:
            return 0.0, 1.0
        return moments.location, moments.scale

    def _to_std(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mx, sx = self._standardizer(self.moments_x)
        my, sy = self._standardizer(self.moments_y)
        return (pts[..., 0] - mx) / sx, (pts[..., 1] - my) / sy

    def _scales(self) -> tuple[float, float]:
        return self._standardizer(self.moments_x)[1], self._standardizer(self.moments_y)[1]

    def update(self, x: float, y: float) -> "BivariateSketch":
        x, y = float(x), float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise SketchError("observation must be finite")
        self.moments_x.update(x)
        self.moments_y.update(y)
        xs, ys = self._to_std(np.array([x, y]))
        hx = hermite_function_values(xs, self.order_n)
        hy = hermite_function_values(ys, self.order_n)
        self.obs_count += 1
        i, lam = self.obs_count, self.lam
        self.coeff_matrix = fold_in(self.coeff_matrix, np.outer(hx, hy), i, lam)
        self.marginal_x = fold_in(self.marginal_x, hx, i, lam)
        self.marginal_y = fold_in(self.marginal_y, hy, i, lam)
        return self

    def update_batch(self, pairs) -> "BivariateSketch":
        if self.config.exponential:
            raise SketchError("batch updates are only defined for stationary sketches")
        pairs = _check_pairs(pairs)
        self.moments_x.update_batch(pairs[:, 0])
        self.moments_y.update_batch(pairs[:, 1])
        xs, ys = self._to_std(pairs)
        size = self.order_n + 1
        joint, sum_x, sum_y = np.zeros((size, size)), np.zeros(size), np.zeros(size)
        for start in range(0, xs.size, BATCH_CHUNK):
            hx = hermite_function_values(xs[start:start + BATCH_CHUNK], self.order_n)
            hy = hermite_function_values(ys[start:start + BATCH_CHUNK], self.order_n)
            joint += hx.T @ hy
            sum_x += hx.sum(axis=0)
            sum_y += hy.sum(axis=0)
        n0, nb = self.obs_count, xs.size
        self.coeff_matrix = combine_counts(self.coeff_matrix, n0, joint, nb)
        self.marginal_x = combine_counts(self.marginal_x, n0, sum_x, nb)
        self.marginal_y = combine_counts(self.marginal_y, n0, sum_y, nb)
        self.obs_count += nb
        return self

    def marginal(self, axis: int) -> UnivariateSketch:
        """The univariate sketch held for one axis (0 = x, 1 = y)."""
        out = UnivariateSketch(self.order_n, self.standardize, self.lam)
        out.coeffs = (self.marginal_x if axis == 0 else self.marginal_y).copy()
        out.moments = (self.moments_x if axis == 0 else self.moments_y).copy()
        out.obs_count = self.obs_count
        return out

    # -- queries ---------------------------------------------------------

    def _require(self, n: int = 1) -> None:
        if self.obs_count < n:
            raise EmptySketchError(
                f"sketch needs at least {n} observation(s), has {self.obs_count}")

    def _points(self, points) -> np.ndarray:
        arr = np.asarray(points, dtype=float)
        if arr.ndim == 1 and arr.size == 2:
            arr = arr.reshape(1, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise SketchError("query points must have shape (m, 2)")
        if not np.all(np.isfinite(arr)):
            raise SketchError("query points must be finite")
        return arr

    def pdf(self, points, clipped: bool = False) -> np.ndarray:
        self._require()
        xs, ys = self._to_std(self._points(points))
        hx = hermite_function_values(xs, self.order_n)
        hy = hermite_function_values(ys, self.order_n)
        sx, sy = self._scales()
        vals = np.einsum("ik,kj,ij->i", hx, self.coeff_matrix, hy) / (sx * sy)
        if clipped:
            vals = np.maximum(vals, PDF_FLOOR)
        return vals

    def cdf(self, points, clipped: bool = False) -> np.ndarray:
        self._require()
        xs, ys = self._to_std(self._points(points))
        lx = lower_integral_values(xs, self.order_n)
        ly = lower_integral_values(ys, self.order_n)
        vals = np.einsum("ik,kj,ij->i", lx, self.coeff_matrix, ly)
        if clipped:
            vals = clip_probability(vals)
        return vals

    def spearman(self) -> float:
        """Spearman's rho from the joint and marginal coefficients."""
        self._require(2)
        return float(np.clip(spearman_form(self.coeff_matrix, self.marginal_x, self.marginal_y), -1.0, 1.0))

    def kendall(self) -> float:
        """Kendall's tau as four times the concordance integral, minus one."""
        self._require(2)
        return float(np.clip(kendall_form(self.coeff_matrix), -1.0, 1.0))


def spearman_form(a_joint: np.ndarray, a_x: np.ndarray, a_y: np.ndarray) -> float:
    """``12 a_x' W' A W a_y - 6 a_x' W' A z - 6 z' A W a_y + 3 z' A z`` (unclamped)."""
    tables = build_basis_tables(a_joint.shape[0] - 1)
    w, z = tables.w_matrix, tables.z_vector
    u = w @ a_x  # row vector a_x' W'
    v = w @ a_y
    return float(12 * u @ a_joint @ v - 6 * u @ a_joint @ z - 6 * z @ a_joint @ v + 3 * z @ a_joint @ z)


def kendall_form(a_joint: np.ndarray) -> float:
    """``4 <A, W A W'> - 1`` (unclamped)."""
    w = build_basis_tables(a_joint.shape[0] - 1).w_matrix
    return float(4.0 * np.sum(a_joint * (w @ a_joint @ w.T)) - 1.0)
