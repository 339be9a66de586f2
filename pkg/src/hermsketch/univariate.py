"""Univariate Hermite series sketch: O(1) updates, PDF, CDF and quantiles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptySketchError, SketchError
from .hermite_basis import (
    MAX_ORDER,
    hermite_function_values,
    lower_integral_values,
    upper_integral_values,
)
from .moments import RunningMoments

DEFAULT_ORDER = 30
ACCELERATION_ROUNDS = 2

PDF_FLOOR = 1e-8
CDF_EPS = 1e-10

INTERP_GRID = np.linspace(-5.0, 5.0, 1001)
BISECT_LO, BISECT_HI = -10.0, 10.0
BISECT_TOL = 1e-10
BISECT_MAX_ITER = 200

# rows of h-values materialized at once during batch updates
BATCH_CHUNK = 1 << 16


@dataclass(frozen=True)
class SketchConfig:
    order_n: int = DEFAULT_ORDER
    standardize: bool = True
    lam: Optional[float] = None

    def __post_init__(self):
        n = self.order_n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise SketchError(f"order_n must be an integer, got {n!r}")
        if not 0 <= n <= MAX_ORDER:
            raise SketchError(f"order_n must be in [0, {MAX_ORDER}], got {n}")
        if self.lam is not None and not (0.0 < self.lam <= 1.0):
            raise SketchError(f"lambda must be in (0, 1], got {self.lam}")

    @property
    def exponential(self) -> bool:
        return self.lam is not None


def accelerate_partial_sums(partials, rounds: int = ACCELERATION_ROUNDS):
    """Iterated pairwise averaging of partial sums along the last axis.

    Each round replaces ``S_k`` by ``(S_k + S_{k+1}) / 2`` and drops one
    element; the last surviving element is returned. ``rounds=0`` returns
    the final partial sum unchanged.
    """
    s = np.asarray(partials, dtype=float)
    if s.shape[-1:] == (0,) or s.ndim == 0:
        raise ValueError("need at least one partial sum")
    rounds = min(int(rounds), s.shape[-1] - 1)
    for _ in range(rounds):
        s = 0.5 * (s[..., :-1] + s[..., 1:])
    return s[..., -1]


def series_sum(coeffs: np.ndarray, basis: np.ndarray, accelerate: bool) -> np.ndarray:
    """``sum_k coeffs[k] * basis[..., k]``, optionally accelerated."""
    if not accelerate:
        return basis @ coeffs
    return accelerate_partial_sums(np.cumsum(basis * coeffs, axis=-1))


def clip_probability(vals: np.ndarray) -> np.ndarray:
    """Clamp to [0, 1]; values within ``CDF_EPS`` of a bound snap onto it."""
    vals = np.clip(vals, CDF_EPS, 1.0 - CDF_EPS)
    return np.where(vals <= CDF_EPS, 0.0, np.where(vals >= 1.0 - CDF_EPS, 1.0, vals))


def check_observations(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise SketchError("no observations given")
    if not np.all(np.isfinite(xs)):
        raise SketchError("observations must be finite")
    return xs


def _query_points(xs) -> tuple[np.ndarray, bool]:
    arr = np.asarray(xs, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if arr.ndim != 1:
        raise SketchError("query points must be a scalar or 1-d array")
    if not np.all(np.isfinite(arr)):
        raise SketchError("query points must be finite")
    return arr, scalar


def _unwrap(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


class UnivariateSketch:
    """Hermite series estimator of a univariate density.

    The whole state is ``order_n + 1`` coefficients plus running moments,
    independent of how many observations were folded in.
    """

    def __init__(self, order_n: int = DEFAULT_ORDER, standardize: bool = True,
                 lam: Optional[float] = None):
        self.config = SketchConfig(order_n, bool(standardize), lam)
        self.coeffs = np.zeros(self.config.order_n + 1)
        self.moments = RunningMoments(lam=lam)
        self.obs_count = 0

    @property
    def order_n(self) -> int:
        return self.config.order_n

    @property
    def standardize(self) -> bool:
        return self.config.standardize

    @property
    def lam(self) -> Optional[float]:
        return self.config.lam

    def __repr__(self):
        return (f"UnivariateSketch(order_n={self.order_n}, standardize={self.standardize}, "
                f"lam={self.lam}, obs_count={self.obs_count})")

    def copy(self) -> "UnivariateSketch":
        other = UnivariateSketch(self.order_n, self.standardize, self.lam)
        other.coeffs = self.coeffs.copy()
        other.moments = self.moments.copy()
        other.obs_count = self.obs_count
        return other

    # -- standardization -------------------------------------------------

    @property
    def location(self) -> float:
        return self.moments.location if self.standardize else 0.0

    @property
    def scale(self) -> float:
        return self.moments.scale if self.standardize else 1.0

    def _to_std(self, x):
        return (x - self.location) / self.scale

    # -- updates ---------------------------------------------------------

    def update(self, x: float) -> "UnivariateSketch":
        """Fold in one observation (stationary or exponentially weighted)."""
        x = float(x)
        if not math.isfinite(x):
            raise SketchError("observation must be finite")
        self.moments.update(x)
        h = hermite_function_values(self._to_std(x), self.order_n)
        self.obs_count += 1
        self.coeffs = fold_in(self.coeffs, h, self.obs_count, self.lam)
        return self

    def update_batch(self, xs) -> "UnivariateSketch":
        """Fold in a batch; all batch points share the final standardization."""
        if self.config.exponential:
            raise SketchError("batch updates are only defined for stationary sketches")
        xs = check_observations(xs).ravel()
        self.moments.update_batch(xs)
        xs = self._to_std(xs)
        total = np.zeros(self.order_n + 1)
        for start in range(0, xs.size, BATCH_CHUNK):
            total += hermite_function_values(xs[start:start + BATCH_CHUNK], self.order_n).sum(axis=0)
        self.coeffs = combine_counts(self.coeffs, self.obs_count, total, xs.size)
        self.obs_count += xs.size
        return self

    # -- queries ---------------------------------------------------------

    def _require(self, n: int = 1) -> None:
        if self.obs_count < n:
            raise EmptySketchError(
                f"sketch needs at least {n} observation(s), has {self.obs_count}")

    def pdf(self, xs, clipped: bool = False, accelerate: bool = True):
        self._require()
        pts, scalar = _query_points(xs)
        basis = hermite_function_values(self._to_std(pts), self.order_n)
        vals = series_sum(self.coeffs, basis, accelerate) / self.scale
        if clipped:
            vals = np.maximum(vals, PDF_FLOOR)
        return _unwrap(vals, scalar)

    def cdf(self, xs, clipped: bool = False, accelerate: bool = True):
        """CDF from the lower half-line integrals of the basis."""
        self._require()
        pts, scalar = _query_points(xs)
        basis = lower_integral_values(self._to_std(pts), self.order_n)
        vals = series_sum(self.coeffs, basis, accelerate)
        if clipped:
            vals = clip_probability(vals)
        return _unwrap(vals, scalar)

    def cdf_quantform(self, xs, accelerate: bool = True):
        """CDF variant used for quantile inversion.

        Uses the upper-tail integral (as one minus the upper tail) for
        standardized arguments >= 0 and the lower integral otherwise.
        """
        self._require()
        pts, scalar = _query_points(xs)
        return _unwrap(self._cdf_alt_std(self._to_std(pts), accelerate), scalar)

    def _cdf_alt_std(self, t: np.ndarray, accelerate: bool) -> np.ndarray:
        out = np.empty_like(t)
        upper = t >= 0
        if upper.any():
            basis = upper_integral_values(t[upper], self.order_n)
            out[upper] = 1.0 - series_sum(self.coeffs, basis, accelerate)
        if (~upper).any():
            basis = lower_integral_values(t[~upper], self.order_n)
            out[~upper] = series_sum(self.coeffs, basis, accelerate)
        return out

    def quantiles(self, ps, algorithm: str = "interpolate", accelerate: bool = True):
        """Quantiles at probabilities ``ps`` (each strictly inside (0, 1))."""
        self._require(2)
        p, scalar = _query_points(ps)
        if np.any((p <= 0.0) | (p >= 1.0)):
            raise SketchError("probabilities must lie strictly inside (0, 1)")
        if algorithm == "interpolate":
            t = self._quantiles_interpolate(p, accelerate)
        elif algorithm == "bisection":
            t = self._quantiles_bisection(p, accelerate)
        else:
            raise SketchError(f"unknown quantile algorithm {algorithm!r}")
        return _unwrap(self.location + self.scale * t, scalar)

    def _quantiles_interpolate(self, p: np.ndarray, accelerate: bool) -> np.ndarray:
        grid = INTERP_GRID
        cdf = np.clip(self._cdf_alt_std(grid, accelerate), CDF_EPS, 1.0 - CDF_EPS)
        cdf = np.maximum.accumulate(cdf)
        idx = np.clip(np.searchsorted(cdf, p, side="left"), 1, grid.size - 1)
        lo, hi = cdf[idx - 1], cdf[idx]
        span = hi - lo
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(span > 0, (p - lo) / span, 0.0)
        frac = np.clip(frac, 0.0, 1.0)
        return grid[idx - 1] + frac * (grid[idx] - grid[idx - 1])

    def _quantiles_bisection(self, p: np.ndarray, accelerate: bool) -> np.ndarray:
        lo = np.full_like(p, BISECT_LO)
        hi = np.full_like(p, BISECT_HI)
        f_lo = self._cdf_alt_std(lo[:1], accelerate)[0]
        f_hi = self._cdf_alt_std(hi[:1], accelerate)[0]
        for _ in range(BISECT_MAX_ITER):
            if np.max(hi - lo) <= BISECT_TOL:
                break
            mid = 0.5 * (lo + hi)
            below = self._cdf_alt_std(mid, accelerate) < p
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        t = 0.5 * (lo + hi)
        # no sign change inside the bracket: clamp to the bracket end
        t = np.where(p <= f_lo, BISECT_LO, t)
        t = np.where(p >= f_hi, BISECT_HI, t)
        return t


def fold_in(coeffs: np.ndarray, term: np.ndarray, i: int, lam: Optional[float]) -> np.ndarray:
    """One coefficient update for the ``i``-th observation (1-based)."""
    if i == 1:
        return term.copy()
    if lam is None:
        return ((i - 1) * coeffs + term) / i
    return (1.0 - lam) * coeffs + lam * term


def combine_counts(coeffs: np.ndarray, n_prior: int, batch_sum: np.ndarray, n_batch: int) -> np.ndarray:
    """Count-weighted average of prior coefficients and a batch sum."""
    if n_prior == 0:
        return batch_sum / n_batch
    total = n_prior + n_batch
    return (n_prior * coeffs + batch_sum) / total
