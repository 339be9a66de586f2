import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from hermsketch import BivariateSketch, EmptySketchError, SketchError, UnivariateSketch
from hermsketch.bivariate import kendall_form, spearman_form
from hermsketch.evaluation import sample_bivariate_normal
from hermsketch.hermite_basis import hermite_function_values

from oracles import kendall_by_integration, spearman_by_integration, synthetic_coefficients

pair_lists = st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=40)


@pytest.fixture(scope="module")
def independent_sketch():
    data = sample_bivariate_normal(100_000, 0.0, 11)
    return BivariateSketch(30).update_batch(data)


@pytest.fixture(scope="module")
def rho_half_sketch():
    data = sample_bivariate_normal(100_000, 0.5, 12)
    return BivariateSketch(30).update_batch(data)


def test_first_pair_outer_product():
    s = BivariateSketch(30, standardize=False).update(0.3, -0.7)
    np.testing.assert_array_equal(
        s.coeff_matrix, np.outer(hermite_function_values(0.3, 30), hermite_function_values(-0.7, 30)))


def test_lambda_one_keeps_last_pair():
    s = BivariateSketch(15, standardize=False, lam=1.0)
    for x, y in [(1.0, 2.0), (-0.5, 0.1), (0.9, -1.3)]:
        s.update(x, y)
    np.testing.assert_array_equal(
        s.coeff_matrix, np.outer(hermite_function_values(0.9, 15), hermite_function_values(-1.3, 15)))


def test_independence_factorizes(independent_sketch):
    s = independent_sketch
    dist = np.linalg.norm(s.coeff_matrix - np.outer(s.marginal_x, s.marginal_y))
    assert dist < 0.05


def test_batch_of_one_equals_sequential():
    a = BivariateSketch(20).update(1.5, -2.0)
    b = BivariateSketch(20).update_batch([[1.5, -2.0]])
    np.testing.assert_array_equal(a.coeff_matrix, b.coeff_matrix)


def test_half_batches_compose(rng):
    data = rng.standard_normal((50, 2))
    a = BivariateSketch(30, standardize=False).update_batch(data[:20]).update_batch(data[20:])
    b = BivariateSketch(30, standardize=False).update_batch(data)
    assert np.max(np.abs(a.coeff_matrix - b.coeff_matrix)) < 1e-14


@given(pair_lists)
@settings(max_examples=100, deadline=None)
def test_sequential_equals_batch(pairs):
    a = BivariateSketch(30, standardize=False)
    for x, y in pairs:
        a.update(x, y)
    b = BivariateSketch(30, standardize=False).update_batch(pairs)
    assert np.max(np.abs(a.coeff_matrix - b.coeff_matrix)) < 1e-14
    assert np.max(np.abs(a.marginal_x - b.marginal_x)) < 1e-14


@given(pair_lists, st.randoms())
@settings(max_examples=100, deadline=None)
def test_permutation_invariance(pairs, rnd):
    shuffled = pairs[:]
    rnd.shuffle(shuffled)
    a, b = BivariateSketch(30, standardize=False), BivariateSketch(30, standardize=False)
    for (x, y), (u, v) in zip(pairs, shuffled):
        a.update(x, y)
        b.update(u, v)
    assert np.max(np.abs(a.coeff_matrix - b.coeff_matrix)) < 1e-12


@pytest.mark.parametrize("standardize", [False, True])
def test_marginals_match_univariate(rng, standardize):
    data = rng.standard_normal((300, 2)) * [1.0, 3.0] + [0.5, -1.0]
    b = BivariateSketch(20, standardize)
    ux, uy = UnivariateSketch(20, standardize), UnivariateSketch(20, standardize)
    for x, y in data:
        b.update(x, y)
        ux.update(x)
        uy.update(y)
    assert np.max(np.abs(b.marginal_x - ux.coeffs)) < 1e-12
    assert np.max(np.abs(b.marginal_y - uy.coeffs)) < 1e-12
    bb = BivariateSketch(20, standardize).update_batch(data)
    assert np.max(np.abs(bb.marginal_x - UnivariateSketch(20, standardize).update_batch(data[:, 0]).coeffs)) < 1e-12
    np.testing.assert_array_equal(b.marginal(1).coeffs, b.marginal_y)


def test_rejects_bad_input():
    s = BivariateSketch(10)
    with pytest.raises(SketchError):
        s.update(math.nan, 1.0)
    with pytest.raises(SketchError):
        s.update_batch(np.zeros((3, 3)))
    with pytest.raises(SketchError):
        BivariateSketch(10, lam=0.1).update_batch([[1.0, 2.0]])
    with pytest.raises(EmptySketchError):
        s.pdf([0.0, 0.0])
    s.update(1.0, 1.0)
    with pytest.raises(EmptySketchError):
        s.kendall()


def test_pdf_at_origin(independent_sketch):
    assert abs(independent_sketch.pdf([0.0, 0.0])[0] - 1 / (2 * math.pi)) < 0.02


def test_pdf_clipped_and_total_mass(rho_half_sketch):
    vals = np.linspace(-5, 5, 81)
    gx, gy = np.meshgrid(vals, vals, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    dens = rho_half_sketch.pdf(pts, clipped=True)
    assert np.all(dens >= 0)
    mass = np.trapezoid(np.trapezoid(dens.reshape(81, 81), vals, axis=1), vals)
    assert abs(mass - 1) < 0.05


def test_cdf_values(independent_sketch, rho_half_sketch):
    assert abs(independent_sketch.cdf([0.0, 0.0])[0] - 0.25) < 0.02
    assert abs(rho_half_sketch.cdf([0.0, 0.0])[0] - (0.25 + math.asin(0.5) / (2 * math.pi))) < 0.02
    assert abs(rho_half_sketch.cdf([5.0, 5.0])[0] - 1) < 0.02
    clipped = rho_half_sketch.cdf([[-40.0, -40.0], [40.0, 40.0]], clipped=True)
    assert np.all((clipped >= 0) & (clipped <= 1))


@pytest.mark.parametrize("seed", range(3))
def test_correlation_forms_match_integration(seed):
    a, ax, ay = synthetic_coefficients(6, seed)
    assert abs(spearman_form(a, ax, ay) - spearman_by_integration(a, ax, ay)) < 1e-6
    assert abs(kendall_form(a) - kendall_by_integration(a)) < 1e-6


def test_spearman_point_estimate():
    data = sample_bivariate_normal(4000, 0.5, 2022)
    s = BivariateSketch(30).update_batch(data)
    assert abs(s.spearman() - stats.spearmanr(data[:, 0], data[:, 1])[0]) < 0.03
    assert abs(s.kendall() - 1 / 3) < 0.02


def test_swap_symmetry(rng):
    data = sample_bivariate_normal(2000, 0.3, rng)
    a = BivariateSketch(30).update_batch(data)
    b = BivariateSketch(30).update_batch(data[:, ::-1])
    assert abs(a.spearman() - b.spearman()) < 1e-10
    assert abs(a.kendall() - b.kendall()) < 1e-10


def test_kendall_independent(independent_sketch):
    assert abs(independent_sketch.kendall()) < 0.02


@pytest.mark.xfail(strict=True, reason="x**3 gives the transformed marginal an unbounded density "
                   "at 0, which a truncated Hermite series cannot resolve; gap is about 0.12 "
                   "and does not shrink with n")
def test_monotone_transform_robustness_cube():
    data = sample_bivariate_normal(20_000, 0.5, 5)
    base = BivariateSketch(30).update_batch(data).kendall()
    cubed = BivariateSketch(30).update_batch(np.column_stack([data[:, 0] ** 3, data[:, 1]])).kendall()
    assert abs(base - cubed) < 0.03


@pytest.mark.parametrize("transform", [np.sinh, lambda x: np.exp(x / 2), lambda x: x + x**3 / 10])
def test_monotone_transform_robustness_smooth(transform):
    data = sample_bivariate_normal(20_000, 0.5, 5)
    base = BivariateSketch(30).update_batch(data).kendall()
    moved = BivariateSketch(30).update_batch(np.column_stack([transform(data[:, 0]), data[:, 1]])).kendall()
    assert abs(base - moved) < 0.03


def test_negation_antisymmetry():
    data = sample_bivariate_normal(20_000, 0.5, 6)
    a = BivariateSketch(30).update_batch(data)
    b = BivariateSketch(30).update_batch(data * [1.0, -1.0])
    assert abs(a.spearman() + b.spearman()) < 0.01
    assert abs(a.kendall() + b.kendall()) < 0.01


@given(pair_lists.filter(lambda p: len(p) >= 2))
@settings(max_examples=50, deadline=None)
def test_correlations_in_range(pairs):
    s = BivariateSketch(10).update_batch(pairs)
    assert -1 <= s.spearman() <= 1
    assert -1 <= s.kendall() <= 1
