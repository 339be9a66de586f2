"""Accuracy studies: quantile IAE/pIAE on known distributions and MAE of the
rank-correlation estimators on bivariate normal data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import stats
from scipy.stats import qmc

from .bivariate import BivariateSketch
from .errors import EmptySketchError
from .univariate import UnivariateSketch

DEFAULT_QMC_POINTS = 2048
PARTIAL_RANGE = (0.01, 0.99)


@dataclass(frozen=True)
class TestDistribution:
    name: str
    dist: object  # frozen scipy.stats distribution

    __test__ = False  # not a pytest class

    def exact_quantile(self, p):
        return self.dist.ppf(p)

    def exact_cdf(self, x):
        return self.dist.cdf(x)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.dist.rvs(size=n, random_state=rng)


TEST_DISTRIBUTIONS = {
    "normal": TestDistribution("normal", stats.norm()),
    "logistic": TestDistribution("logistic", stats.logistic()),
    "exponential": TestDistribution("exponential", stats.expon()),
    "uniform": TestDistribution("uniform", stats.uniform()),
}


@dataclass
class StudyResult:
    study: str
    name: str
    n: int
    replications: int
    miae: Optional[float] = None
    pmiae: Optional[float] = None
    mae: Optional[float] = None
    std: Optional[float] = None


def sobol_points(count: int, seed: int = 0) -> np.ndarray:
    sampler = qmc.Sobol(d=1, scramble=True, seed=seed)
    m = int(math.log2(count))
    pts = sampler.random_base2(m) if 2**m == count else sampler.random(count)
    return pts[:, 0]


def iae_measures(estimator: Union[UnivariateSketch, Callable], dist: TestDistribution,
                 qmc_points: int = DEFAULT_QMC_POINTS, seed: int = 0) -> tuple[float, float]:
    """Integrated absolute quantile error over (0, 1) and over (0.01, 0.99).

    Both integrals are Quasi-Monte Carlo averages over a scrambled Sobol
    set; the partial one is scaled by the interval length. ``estimator`` is
    a sketch (queried with the interpolate algorithm and acceleration) or
    any callable mapping probabilities to quantiles.
    """
    if qmc_points < 256:
        raise ValueError("qmc_points must be at least 256")
    if isinstance(estimator, UnivariateSketch):
        if estimator.obs_count < 2:
            raise EmptySketchError("sketch has too few observations")
        sketch = estimator

        def estimator(p):
            return sketch.quantiles(p, algorithm="interpolate", accelerate=True)

    u = sobol_points(qmc_points, seed)
    lo, hi = PARTIAL_RANGE
    p_partial = lo + (hi - lo) * u
    iae = float(np.mean(np.abs(estimator(u) - dist.exact_quantile(u))))
    piae = (hi - lo) * float(np.mean(np.abs(estimator(p_partial) - dist.exact_quantile(p_partial))))
    return iae, piae


def quantile_iae_study(dist: TestDistribution, n: int, replications: int, order_n: int = 30,
                       seed: int = 0, qmc_points: int = DEFAULT_QMC_POINTS) -> StudyResult:
    """MIAE and pMIAE of batch-updated standardized sketches."""
    iaes, piaes = [], []
    for rep in range(replications):
        rng = np.random.default_rng([seed, rep])
        sketch = UnivariateSketch(order_n, standardize=True).update_batch(dist.sample(n, rng))
        iae, piae = iae_measures(sketch, dist, qmc_points)
        iaes.append(iae)
        piaes.append(piae)
    return StudyResult("quantile", dist.name, n, replications,
                       miae=float(np.mean(iaes)), pmiae=float(np.mean(piaes)),
                       std=float(np.std(piaes, ddof=1)) if replications > 1 else 0.0)


def sample_bivariate_normal(n: int, rho: float, seed=None) -> np.ndarray:
    """Standard bivariate normal pairs with correlation ``rho``."""
    if n < 1:
        raise ValueError("n must be positive")
    if not -1.0 < rho < 1.0:
        raise ValueError("rho must lie strictly inside (-1, 1)")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    x = rng.standard_normal(n)
    z = rng.standard_normal(n)
    return np.column_stack([x, rho * x + math.sqrt(1.0 - rho * rho) * z])


def kendall_truth(rho: float) -> float:
    return 2.0 / math.pi * math.asin(rho)


def correlation_mae_study(n: int, rhos: Sequence[float], m: int, order_n: int = 30,
                          seed: int = 0) -> list[StudyResult]:
    """Per-rho MAE of the Spearman and Kendall estimators.

    Spearman errors are against the exact sample coefficient of each draw,
    Kendall errors against the analytic value for the bivariate normal.
    Returns one result per (statistic, rho); ``std`` is across replications.
    """
    if m < 2:
        raise ValueError("need at least two replications")
    for rho in rhos:
        if not -1.0 < rho < 1.0:
            raise ValueError(f"rho must lie strictly inside (-1, 1), got {rho}")
    results = []
    for i, rho in enumerate(rhos):
        sp_err, kt_err = [], []
        for rep in range(m):
            data = sample_bivariate_normal(n, rho, np.random.default_rng([seed, i, rep]))
            sketch = BivariateSketch(order_n, standardize=True).update_batch(data)
            sample_rho = stats.spearmanr(data[:, 0], data[:, 1])[0]
            sp_err.append(abs(sketch.spearman() - sample_rho))
            kt_err.append(abs(sketch.kendall() - kendall_truth(rho)))
        for stat, errs in (("spearman", sp_err), ("kendall", kt_err)):
            results.append(StudyResult(stat, f"rho={rho:g}", n, m,
                                       mae=float(np.mean(errs)), std=float(np.std(errs, ddof=1))))
    return results


def summarize_mae(results: Sequence[StudyResult], statistic: str) -> tuple[float, float]:
    """Average and standard deviation of the per-rho MAE for one statistic."""
    maes = [r.mae for r in results if r.study == statistic]
    if not maes:
        raise ValueError(f"no results for {statistic!r}")
    return float(np.mean(maes)), float(np.std(maes, ddof=1)) if len(maes) > 1 else 0.0


def drifting_median_run(seed: int, n: int = 1000, drift: float = 0.001, lam: float = 0.01,
                        order_n: int = 10) -> tuple[float, float]:
    """Track a normal stream whose mean rises by ``drift`` per step.

    Returns the final median estimate and the final true mean.
    """
    rng = np.random.default_rng(seed)
    sketch = UnivariateSketch(order_n, standardize=True, lam=lam)
    for i in range(1, n + 1):
        sketch.update(rng.normal(drift * i))
    return float(sketch.quantiles(0.5)), drift * n
