"""Merging sketches built on disjoint shards of a data set.

Unstandardized sketches merge exactly by count-weighted averaging.
Standardized shards are re-expressed in the merged standardization first:
each shard's coefficients become the expectation of the re-standardized
basis under the shard's own density estimate, evaluated with Gauss-Hermite
quadrature.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .bivariate import BivariateSketch
from .errors import IncompatibleSketchError, SketchError
from .hermite_basis import gauss_hermite, hermite_function_values, hermite_weightless_values
from .moments import RunningMoments, merge_moments
from .univariate import UnivariateSketch

MERGE_QUADRATURE_ORDER = 64


def _check_mergeable(sketches: Sequence, kind: type) -> None:
    if not sketches:
        raise SketchError("nothing to merge")
    if not all(isinstance(s, kind) for s in sketches):
        raise IncompatibleSketchError(f"all sketches must be {kind.__name__}")
    first = sketches[0]
    for s in sketches:
        if s.order_n != first.order_n:
            raise IncompatibleSketchError(
                f"cannot merge sketches of order {first.order_n} and {s.order_n}")
        if s.standardize != first.standardize:
            raise IncompatibleSketchError("standardize flags must all agree")
        if s.lam is not None:
            raise IncompatibleSketchError("exponentially weighted sketches cannot be merged")
    need = 2 if first.standardize else 1
    for s in sketches:
        if s.obs_count < need:
            raise SketchError(f"every shard needs at least {need} observation(s) to merge")


def restandardize_matrix(order_n: int, shard: RunningMoments, merged: RunningMoments,
                         quadrature_order: int | None = None) -> np.ndarray:
    """Matrix ``T`` mapping shard coefficients to merged coordinates.

    ``T[a, k] = int h_a(u) h_k((s_j u + m_j - m) / s) du``, so a shard
    density ``sum_a c_a h_a`` has merged coefficients ``T.T @ c``.
    """
    if quadrature_order is None:
        quadrature_order = max(MERGE_QUADRATURE_ORDER, order_n + 1)
    t, w = gauss_hermite(quadrature_order)
    shifted = (shard.scale * t + shard.location - merged.location) / merged.scale
    left = w[:, None] * hermite_weightless_values(t, order_n)
    right = np.exp(0.5 * t * t)[:, None] * hermite_function_values(shifted, order_n)
    return left.T @ right


def merge_univariate(sketches: Sequence[UnivariateSketch]) -> UnivariateSketch:
    sketches = list(sketches)
    _check_mergeable(sketches, UnivariateSketch)
    first = sketches[0]
    if len(sketches) == 1:
        return first.copy()
    out = UnivariateSketch(first.order_n, first.standardize)
    out.moments = merge_moments([s.moments for s in sketches])
    total = sum(s.obs_count for s in sketches)
    coeffs = np.zeros(first.order_n + 1)
    for s in sketches:
        c = s.coeffs
        if first.standardize:
            c = restandardize_matrix(first.order_n, s.moments, out.moments).T @ c
        coeffs += (s.obs_count / total) * c
    out.coeffs = coeffs
    out.obs_count = total
    return out


def merge_bivariate(sketches: Sequence[BivariateSketch]) -> BivariateSketch:
    sketches = list(sketches)
    _check_mergeable(sketches, BivariateSketch)
    first = sketches[0]
    if len(sketches) == 1:
        return first.copy()
    n = first.order_n
    out = BivariateSketch(n, first.standardize)
    out.moments_x = merge_moments([s.moments_x for s in sketches])
    out.moments_y = merge_moments([s.moments_y for s in sketches])
    total = sum(s.obs_count for s in sketches)
    joint = np.zeros((n + 1, n + 1))
    mx, my = np.zeros(n + 1), np.zeros(n + 1)
    for s in sketches:
        a, ax, ay = s.coeff_matrix, s.marginal_x, s.marginal_y
        if first.standardize:
            tx = restandardize_matrix(n, s.moments_x, out.moments_x)
            ty = restandardize_matrix(n, s.moments_y, out.moments_y)
            a, ax, ay = tx.T @ a @ ty, tx.T @ ax, ty.T @ ay
        weight = s.obs_count / total
        joint += weight * a
        mx += weight * ax
        my += weight * ay
    out.coeff_matrix, out.marginal_x, out.marginal_y = joint, mx, my
    out.obs_count = total
    return out


def merge(sketches):
    """Merge a list of sketches of one kind."""
    sketches = list(sketches)
    if sketches and isinstance(sketches[0], BivariateSketch):
        return merge_bivariate(sketches)
    return merge_univariate(sketches)
