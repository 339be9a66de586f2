"""Normalized Hermite functions, their half-line integrals and the
precomputed cross-integral tables used by the rank-correlation estimators.

All evaluators are vectorized: a scalar ``x`` gives a vector of length
``n + 1``, an array ``x`` of shape ``(m,)`` gives a matrix ``(m, n + 1)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import erfc

MAX_ORDER = 100

PI_QUARTER = math.pi**0.25
SQRT2 = math.sqrt(2.0)


def _check_order(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"order must be an integer, got {n!r}")
    n = int(n)
    if n < 0 or n > MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}], got {n}")
    return n


def _check_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim > 1:
        raise ValueError("x must be a scalar or a 1-d array")
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    return x


def _recur(h0: np.ndarray, x: np.ndarray, n: int) -> np.ndarray:
    # h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}
    out = np.empty(x.shape + (n + 1,))
    out[..., 0] = h0
    if n >= 1:
        out[..., 1] = SQRT2 * x * h0
    for k in range(1, n):
        out[..., k + 1] = (
            x * math.sqrt(2.0 / (k + 1)) * out[..., k]
            - math.sqrt(k / (k + 1)) * out[..., k - 1]
        )
    return out


def hermite_function_values(x, n: int) -> np.ndarray:
    """Return ``h_0(x), ..., h_n(x)``.

    The recurrence runs on the normalized functions themselves, so nothing
    overflows for large ``k`` or ``|x|``.
    """
    n = _check_order(n)
    x = _check_points(x)
    return _recur(np.exp(-0.5 * x * x) / PI_QUARTER, x, n)


def hermite_weightless_values(x, n: int) -> np.ndarray:
    """Return ``exp(x**2 / 2) * h_k(x)`` for ``k = 0..n``.

    These are the orthonormal polynomials for the weight ``exp(-x**2)``;
    used as quadrature integrands where the Gaussian factor is carried by
    the Gauss-Hermite weights.
    """
    n = _check_order(n)
    x = _check_points(x)
    return _recur(np.full(x.shape, 1.0 / PI_QUARTER), x, n)


def lower_integral_values(x, n: int) -> np.ndarray:
    """Return ``int_{-inf}^{x} h_k(t) dt`` for ``k = 0..n``."""
    n = _check_order(n)
    x = _check_points(x)
    gauss = np.exp(-0.5 * x * x)
    out = np.empty(x.shape + (n + 1,))
    out[..., 0] = PI_QUARTER / SQRT2 * erfc(-x / SQRT2)
    if n >= 1:
        out[..., 1] = -SQRT2 / PI_QUARTER * gauss
    if n >= 2:
        h = _recur(gauss / PI_QUARTER, x, n - 1)
        for k in range(1, n):
            out[..., k + 1] = (
                -math.sqrt(2.0 / (k + 1)) * h[..., k]
                + math.sqrt(k / (k + 1)) * out[..., k - 1]
            )
    return out


def upper_integral_values(x, n: int) -> np.ndarray:
    """Return ``int_{x}^{inf} h_k(t) dt`` for ``k = 0..n``."""
    n = _check_order(n)
    x = _check_points(x)
    gauss = np.exp(-0.5 * x * x)
    out = np.empty(x.shape + (n + 1,))
    out[..., 0] = PI_QUARTER / SQRT2 * erfc(x / SQRT2)
    if n >= 1:
        out[..., 1] = SQRT2 / PI_QUARTER * gauss
    if n >= 2:
        h = _recur(gauss / PI_QUARTER, x, n - 1)
        for k in range(1, n):
            out[..., k + 1] = (
                math.sqrt(2.0 / (k + 1)) * h[..., k]
                + math.sqrt(k / (k + 1)) * out[..., k - 1]
            )
    return out


def default_quadrature_order(n: int) -> int:
    return max(2 * n + 8, 64)


@dataclass(frozen=True)
class HermiteBasisTables:
    """Cross-integrals of the basis for a fixed truncation order.

    ``w_matrix[k, l] = int h_k(u) int_{-inf}^{u} h_l(v) dv du`` and
    ``z_vector[k] = int h_k(u) du``. ``gh_nodes``/``gh_weights`` are the
    Gauss-Hermite rule for the weight ``exp(-x**2)``.
    """

    order_n: int
    w_matrix: np.ndarray
    z_vector: np.ndarray
    gh_nodes: np.ndarray
    gh_weights: np.ndarray
    quadrature_order: int


def gauss_hermite(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order < 1:
        raise ValueError("quadrature order must be positive")
    with np.errstate(all="ignore"):
        nodes, weights = hermgauss(order)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
        raise ValueError(f"Gauss-Hermite rule of order {order} did not converge")
    if abs(weights.sum() - math.sqrt(math.pi)) > 1e-10:
        raise ValueError(f"Gauss-Hermite rule of order {order} is inaccurate")
    return nodes, weights


def _antiderivative_split(n: int):
    """Split ``int_{-inf}^{u} h_l = c_l * I_0(u) + exp(-u**2/2) * g_l(u)``.

    Returns ``c`` (zero for odd l) and a callable giving the polynomial
    parts ``g_l`` at given points.
    """
    c = np.zeros(n + 1)
    c[0] = 1.0
    for k in range(1, n):
        c[k + 1] = math.sqrt(k / (k + 1)) * c[k - 1]

    def poly_part(t: np.ndarray) -> np.ndarray:
        hhat = hermite_weightless_values(t, n)
        g = np.zeros(t.shape + (n + 1,))
        if n >= 1:
            g[..., 1] = -SQRT2 / PI_QUARTER
        for k in range(1, n):
            g[..., k + 1] = (
                -math.sqrt(2.0 / (k + 1)) * hhat[..., k]
                + math.sqrt(k / (k + 1)) * g[..., k - 1]
            )
        return g

    return c, poly_part


@functools.lru_cache(maxsize=None)
def build_basis_tables(n: int, quadrature_order: int | None = None) -> HermiteBasisTables:
    """Build (and cache) the W matrix and z vector for order ``n``.

    Every integral is reduced to Gauss-Hermite sums of polynomials, so the
    rule is exact once it has at least ``n + 1`` nodes:

    * ``z_k``: substitute ``u = sqrt(2) t``; the integrand is
      ``exp(-t**2)`` times a degree-k polynomial.
    * ``W``: the antiderivative is ``c_l I_0 + exp(-u**2/2) g_l``. The
      second part times ``h_k`` is ``exp(-u**2)`` times a polynomial. For the
      first, ``int h_k I_0`` is ``I_0``'s symmetric half times ``z_k`` for
      even k and, by parts, ``-int h_0 g_k exp(-u**2/2)`` for odd k.
    """
    n = _check_order(n)
    if quadrature_order is None:
        quadrature_order = default_quadrature_order(n)
    if quadrature_order < n + 1:
        raise ValueError("quadrature_order must be at least n + 1")
    nodes, weights = gauss_hermite(quadrature_order)

    u = SQRT2 * nodes
    z = (SQRT2 * weights) @ hermite_weightless_values(u, n)
    # odd k integrands are exactly antisymmetric
    z[1::2] = 0.0

    c, poly_part = _antiderivative_split(n)
    hhat = weights[:, None] * hermite_weightless_values(nodes, n)
    gauss_part = hhat.T @ poly_part(nodes)  # int h_k exp(-u^2/2) g_l
    with_i0 = PI_QUARTER / SQRT2 * z  # even k
    with_i0[1::2] = -gauss_part[0, 1::2]  # odd k
    w = np.outer(with_i0, c) + gauss_part

    for arr in (w, z, nodes, weights):
        arr.setflags(write=False)
    return HermiteBasisTables(
        order_n=n,
        w_matrix=w,
        z_vector=z,
        gh_nodes=nodes,
        gh_weights=weights,
        quadrature_order=quadrature_order,
    )
