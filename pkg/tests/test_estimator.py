# coding=utf-8
"""Unit tests for :mod:`legproj.estimator`."""
import math

import numpy as np
import pytest

from legproj import constants
from legproj import estimator
from legproj import exceptions
from legproj import sampler
from legproj import testfam
from legproj.enums import Algorithm
from legproj.enums import CoeffKind
from legproj.enums import Target
from legproj.types import CoeffVector
from legproj.types import MomentVector
from legproj.types import SampleBatch
from legproj.types import TestFamilyParams


P12 = TestFamilyParams(1, 2)


def test_estimate_moments_examples():
    """Test sample moments of a small batch."""
    moments = estimator.estimate_moments(SampleBatch([0.5, -0.5]), 3).moments
    np.testing.assert_array_equal(moments, [1.0, 0.0, 0.25, 0.0])
    moments = estimator.estimate_moments([0.2, 0.4, 0.9], 1).moments
    assert moments[1] == pytest.approx(0.5, abs=1e-15)


def test_estimate_moments_chunking():
    """Test the chunk size does not change the moments beyond rounding."""
    values = sampler.sample(P12, sampler.RngStream(8), 10000)
    small = estimator.estimate_moments(values, 6, chunk_size=7).moments
    large = estimator.estimate_moments(values, 6).moments
    np.testing.assert_allclose(small, large, rtol=0, atol=1e-15)


def test_estimate_moments_rejects():
    """Test invalid moment requests."""
    with pytest.raises(ValueError):
        estimator.estimate_moments([0.1], 0)
    with pytest.raises(exceptions.EmptySampleError):
        estimator.estimate_moments([], 2)


def test_coeffs_from_uniform_moments():
    """Test the moments of the uniform density give its coefficients."""
    g = estimator.coeffs_from_moments(MomentVector([1.0, 0.0, 1 / 3]), 2)
    assert g.kind is CoeffKind.DENSITY
    np.testing.assert_allclose(g.coeffs, [1 / math.sqrt(2), 0.0, 0.0], rtol=0, atol=1e-15)


def test_coeffs_from_exact_moments():
    """Test exact moments of a family reproduce its exact coefficients."""
    moments = MomentVector([float(value) for value in testfam.moments(P12, 10)])
    g = estimator.coeffs_from_moments(moments, 10)
    np.testing.assert_allclose(
        g.coeffs, testfam.exact_density_coeffs(P12, 10).coeffs, rtol=0, atol=1e-12
    )


def test_coeffs_from_moments_too_short():
    """Test too few moments are rejected."""
    with pytest.raises(exceptions.CoefficientLengthError):
        estimator.coeffs_from_moments(MomentVector([1.0, 0.0]), 2)


@pytest.mark.parametrize(
    "values,expected",
    [
        ([0.0], [math.sqrt(0.5), 0.0, -0.5 * math.sqrt(2.5)]),
        ([1.0, -1.0], [math.sqrt(0.5), 0.0, math.sqrt(2.5)]),
    ],
)
def test_coeffs_direct_examples(values, expected):
    """Test the direct route on samples with known coefficients."""
    g = estimator.coeffs_direct(SampleBatch(values), 2)
    np.testing.assert_allclose(g.coeffs, expected, rtol=0, atol=1e-15)


@pytest.mark.parametrize("n", [1, 4, 8, 12])
def test_routes_agree(n):
    """Test both routes give the same estimate on the same sample."""
    first = estimator.run_algorithm_1(P12, n, 4096, sampler.RngStream(31))
    second = estimator.run_algorithm_2(P12, n, 4096, sampler.RngStream(31))
    np.testing.assert_allclose(first.g_coeffs.coeffs, second.g_coeffs.coeffs, rtol=0, atol=1e-9)
    np.testing.assert_allclose(first.f_coeffs.coeffs, second.f_coeffs.coeffs, rtol=0, atol=1e-9)


@pytest.mark.parametrize("algorithm", list(Algorithm))
def test_estimate_streams_the_sample(monkeypatch, algorithm):
    """Test drawing the sample in pieces gives the estimate of a single draw."""
    N = 5 * constants.ACCUMULATION_CHUNK_SIZE + 17
    whole = estimator.run_algorithm(algorithm, P12, 6, N, sampler.RngStream(21))
    batch = sampler.sample(P12, sampler.RngStream(21), N)
    monkeypatch.setattr(
        estimator.constants, "SAMPLE_CHUNK_SIZE", 2 * constants.ACCUMULATION_CHUNK_SIZE
    )
    drawn = []
    sample = sampler.sample

    def counted_sample(p, rng, N, **kwargs):
        drawn.append(N)
        return sample(p, rng, N, **kwargs)

    monkeypatch.setattr(estimator.sampler, "sample", counted_sample)
    rng = sampler.RngStream(21)
    streamed = estimator.run_algorithm(algorithm, P12, 6, N, rng)
    assert drawn == [16384, 16384, 8209]
    assert rng.position == N
    np.testing.assert_array_equal(streamed.g_coeffs.coeffs, whole.g_coeffs.coeffs)
    if algorithm is Algorithm.DIRECT:
        expected = estimator.coeffs_direct(batch, 7).coeffs
    else:
        expected = estimator.coeffs_from_moments(estimator.estimate_moments(batch, 7), 7).coeffs
    np.testing.assert_allclose(streamed.g_coeffs.coeffs, expected, rtol=0, atol=1e-12)


@pytest.mark.parametrize("algorithm", list(Algorithm))
def test_estimate_shapes(algorithm):
    """Test coefficient counts and provenance of an estimate."""
    est = estimator.run_algorithm(algorithm, P12, 8, 1024, sampler.RngStream(5, stream_id=3))
    assert est.algorithm is algorithm
    assert len(est.g_coeffs) == 10
    assert len(est.f_coeffs) == 9
    assert len(est.coefficients(Target.DENSITY)) == 9
    assert len(est.coefficients(Target.DISTRIBUTION)) == 9
    assert est.g_coeffs.coeffs[0] == constants.NORMALIZED_P0
    assert (est.seed, est.stream_id, est.n, est.N) == (5, 3, 8, 1024)


def test_estimate_evaluation():
    """Test the estimates evaluate to a rough density and distribution function."""
    est = estimator.run_algorithm_2(P12, 8, 2**16, sampler.RngStream(12))
    assert est.density(0.0) == pytest.approx(6 / 7, abs=0.1)
    assert est.distribution(0.0) == pytest.approx(3 / 7, abs=0.02)
    assert est.distribution(-1.0) == pytest.approx(0.0, abs=0.02)
    assert est.distribution(2.0) == 1.0
    assert est.density(-2.0) == 0.0


def test_external_sampler():
    """Test estimates from a sampler outside of the test family."""
    rng = np.random.default_rng(99)
    est = estimator.run_algorithm_2(lambda N: rng.uniform(-1, 1, N), 4, 2**16)
    assert est.seed is None
    np.testing.assert_allclose(est.g_coeffs.coeffs[1:], 0.0, atol=0.02)
    with pytest.raises(exceptions.EmptySampleError):
        estimator.run_algorithm_2(lambda N: np.zeros(N - 1), 4, 10)


def test_estimate_rejects():
    """Test invalid lengths and sample sizes."""
    with pytest.raises(ValueError):
        estimator.run_algorithm_1(P12, -1, 10, sampler.RngStream(1))
    with pytest.raises(exceptions.EmptySampleError):
        estimator.run_algorithm_2(P12, 4, 0, sampler.RngStream(1))


def test_error_of_exact_coefficients():
    """Test an estimate equal to the truth has only the truncation error."""
    p = TestFamilyParams(3, 2)
    exact = testfam.exact_density_coeffs(p, 17)
    est = estimator.ProjectionEstimate.from_density_coeffs(exact, 1, Algorithm.DIRECT)
    g_report, f_report = estimator.estimate_error_vs_truth(est, p, m=0)
    eps_g, eps_f = testfam.deterministic_errors(p, 16)
    assert g_report.eps_stoch == 0.0
    assert g_report.eps_total == eps_g
    assert f_report.eps_stoch < 1e-14
    assert f_report.eps_total == pytest.approx(eps_f, rel=1e-9)
    assert (g_report.target, f_report.target) == (Target.DENSITY, Target.DISTRIBUTION)
    assert (g_report.n, g_report.m, g_report.N) == (16, 0, 1)


def test_error_total_is_pythagorean():
    """Test the total error combines both components."""
    est = estimator.run_algorithm_2(P12, 8, 2048, sampler.RngStream(44))
    for report in estimator.estimate_error_vs_truth(est, P12, m=2, replicate=3):
        assert report.eps_total**2 == pytest.approx(report.eps_det**2 + report.eps_stoch**2)
        assert report.replicate == 3
        assert report.seed == 44


def test_long_expansion_is_finite():
    """Test long expansions from moderate samples stay finite."""
    for algorithm in Algorithm:
        est = estimator.run_algorithm(algorithm, P12, 64, 2**12, sampler.RngStream(2))
        assert np.all(np.isfinite(est.g_coeffs.coeffs))
        assert np.all(np.isfinite(est.f_coeffs.coeffs))


def test_projection_estimate_consistency():
    """Test an estimate rejects distribution coefficients not derived from its density."""
    g = CoeffVector(CoeffKind.DENSITY, [math.sqrt(0.5), 0.1, 0.0])
    f = CoeffVector(CoeffKind.DISTRIBUTION, [0.0, 0.0])
    with pytest.raises(AssertionError):
        estimator.ProjectionEstimate(g, f, 1, 10, Algorithm.DIRECT)


def test_replicate_statistics():
    """Test replicate means and variances."""
    mean, variance = estimator.replicate_statistics(P12, 4, 1024, 5, seed=3)
    assert mean.shape == variance.shape == (5,)
    assert mean[0] == pytest.approx(constants.NORMALIZED_P0, abs=1e-15)
    assert variance[0] == pytest.approx(0.0, abs=1e-30)
    assert np.all(variance[1:] > 0)
    with pytest.raises(ValueError):
        estimator.replicate_statistics(P12, 4, 1024, 1, seed=3)
