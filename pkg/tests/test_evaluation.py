import math

import numpy as np
import pytest
from scipy import stats

from hermsketch import EmptySketchError, UnivariateSketch
from hermsketch.evaluation import (TEST_DISTRIBUTIONS, correlation_mae_study, drifting_median_run,
                                   iae_measures, kendall_truth, quantile_iae_study,
                                   sample_bivariate_normal, sobol_points, summarize_mae)

normal = TEST_DISTRIBUTIONS["normal"]


def test_perfect_estimator_scores_zero():
    iae, piae = iae_measures(normal.exact_quantile, normal)
    assert iae == 0.0 and piae == 0.0


def test_constant_offset():
    iae, piae = iae_measures(lambda p: normal.exact_quantile(p) + 0.1, normal)
    assert abs(iae - 0.1) < 1e-12
    assert abs(piae - 0.098) < 1e-12


def test_qmc_points_guard():
    with pytest.raises(ValueError):
        iae_measures(normal.exact_quantile, normal, qmc_points=128)
    with pytest.raises(EmptySketchError):
        iae_measures(UnivariateSketch(10).update(1.0), normal)


def test_sobol_points_are_balanced():
    u = sobol_points(1024, seed=3)
    assert u.shape == (1024,) and np.all((u > 0) & (u < 1))
    assert np.array_equal(np.histogram(u, bins=16, range=(0, 1))[0], np.full(16, 64))


def test_distribution_quantile_cdf_consistency():
    ps = np.linspace(0.01, 0.99, 50)
    for dist in TEST_DISTRIBUTIONS.values():
        assert np.max(np.abs(dist.exact_cdf(dist.exact_quantile(ps)) - ps)) < 1e-12


def test_quantile_study_deterministic():
    a = quantile_iae_study(TEST_DISTRIBUTIONS["logistic"], 2000, 2, seed=9, qmc_points=256)
    b = quantile_iae_study(TEST_DISTRIBUTIONS["logistic"], 2000, 2, seed=9, qmc_points=256)
    assert a == b and a.pmiae < a.miae


def test_bivariate_normal_sampler():
    data = sample_bivariate_normal(200_000, 0.6, 0)
    assert data.shape == (200_000, 2)
    assert abs(np.corrcoef(data.T)[0, 1] - 0.6) < 0.01
    assert np.all(np.abs(data.std(axis=0) - 1) < 0.01)
    assert abs(stats.kendalltau(data[:5000, 0], data[:5000, 1])[0] - kendall_truth(0.6)) < 0.03
    with pytest.raises(ValueError):
        sample_bivariate_normal(10, 1.0)


def test_kendall_truth():
    assert kendall_truth(0.0) == 0.0
    assert abs(kendall_truth(0.5) - 1 / 3) < 1e-15
    assert abs(kendall_truth(-1.0) + 1) < 1e-15


def test_correlation_study_shape_and_determinism():
    rows = correlation_mae_study(1000, [-0.5, 0.5], 2, order_n=10, seed=1)
    assert [r.study for r in rows] == ["spearman", "kendall"] * 2
    assert rows == correlation_mae_study(1000, [-0.5, 0.5], 2, order_n=10, seed=1)
    avg, std = summarize_mae(rows, "kendall")
    assert math.isclose(avg, (rows[1].mae + rows[3].mae) / 2)
    with pytest.raises(ValueError):
        correlation_mae_study(100, [0.5], 1)
    with pytest.raises(ValueError):
        summarize_mae(rows, "pearson")


def test_drifting_median_run():
    est, truth = drifting_median_run(0)
    assert truth == 1.0 and abs(est - truth) < 0.5
