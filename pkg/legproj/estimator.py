# coding=utf-8
"""Randomized projection estimates of the density and the distribution function.

Both routes estimate the density coefficients ``G_0 .. G_(n+1)`` from one
sample and obtain the ``n + 1`` distribution coefficients from them through
:func:`legproj.legendre.antiderivative_transform`:

* the moment route estimates the initial moments and combines them with the
  explicit Legendre coefficients; the alternating sums cancel badly once the
  degree grows, so it is kept for comparison only;
* the direct route averages ``P^_i(xi_l)`` computed by the recurrence and is
  the default.
"""
import logging
import math

import numpy as np
from attrs import frozen

from legproj import constants
from legproj import exceptions
from legproj import legendre
from legproj import sampler
from legproj import testfam
from legproj.enums import Algorithm
from legproj.enums import CoeffKind
from legproj.enums import SamplingMethod
from legproj.enums import Target
from legproj.summation import chunked
from legproj.summation import CompensatedAccumulator
from legproj.types import CoeffVector
from legproj.types import ErrorReport
from legproj.types import MomentVector
from legproj.types import SampleBatch
from legproj.types import TestFamilyParams


logger = logging.getLogger(__name__)


@frozen(eq=False)
class ProjectionEstimate:
    """Projection estimates of the density and the distribution function.

    ``g_coeffs`` carries ``n + 2`` density coefficients, one more than the
    expansion length, because the distribution estimate of length ``n + 1``
    needs it. ``f_coeffs`` always equals the transform of ``g_coeffs``.
    """

    g_coeffs: CoeffVector
    f_coeffs: CoeffVector
    n: int
    N: int
    algorithm: Algorithm
    seed: int = None
    stream_id: int = None

    def __attrs_post_init__(self):
        assert len(self.g_coeffs) == self.n + 2
        assert np.array_equal(
            self.f_coeffs.coeffs, legendre.antiderivative_transform(self.g_coeffs).coeffs
        )

    @classmethod
    def from_density_coeffs(cls, g_coeffs, N, algorithm, seed=None, stream_id=None):
        """Build an estimate, deriving the distribution coefficients."""
        return cls(
            g_coeffs=g_coeffs,
            f_coeffs=legendre.antiderivative_transform(g_coeffs),
            n=len(g_coeffs) - 2,
            N=N,
            algorithm=algorithm,
            seed=seed,
            stream_id=stream_id,
        )

    def coefficients(self, target):
        """Return the ``n + 1`` coefficients of the density or distribution estimate."""
        if Target(target) is Target.DENSITY:
            return self.g_coeffs.truncated(self.n)
        return self.f_coeffs

    def density(self, x):
        """Evaluate the density estimate of length ``n``."""
        return legendre.eval_series(self.coefficients(Target.DENSITY), x)

    def distribution(self, x):
        """Evaluate the distribution function estimate."""
        return legendre.eval_series(self.f_coeffs, x)


def _sample_values(batch):
    if isinstance(batch, SampleBatch):
        values = batch.values
    else:
        values = np.asarray(batch, dtype=np.float64).ravel()
    if values.size == 0:
        raise exceptions.EmptySampleError("Cannot estimate from an empty sample.")
    return values


def estimate_moments(batch, kmax, chunk_size=constants.ACCUMULATION_CHUNK_SIZE):
    """Return the sample initial moments ``M_0 .. M_kmax`` of a batch.

    Powers are built by repeated multiplication; each chunk of samples is
    summed and the chunk sums are accumulated with compensation.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1, got {!r}.".format(kmax))
    accumulator = CompensatedAccumulator(kmax + 1)
    _add_power_sums(accumulator, _sample_values(batch), kmax, chunk_size)
    return MomentVector(accumulator.mean())


def _add_power_sums(accumulator, values, kmax, chunk_size):
    for chunk in chunked(values, chunk_size):
        powers = np.empty((kmax + 1, chunk.size), dtype=np.float64)
        powers[0] = 1.0
        for k in range(1, kmax + 1):
            powers[k] = powers[k - 1] * chunk
        accumulator.add(powers.sum(axis=1), count=chunk.size)


def _add_polynomial_sums(accumulator, values, n, chunk_size):
    for chunk in chunked(values, chunk_size):
        accumulator.add(legendre.eval_normalized_all(n, chunk).sum(axis=1), count=chunk.size)


def _direct_coeffs(accumulator):
    coeffs = accumulator.mean()
    coeffs[0] = constants.NORMALIZED_P0
    return CoeffVector(CoeffKind.DENSITY, coeffs)


def coeffs_from_moments(m, n):
    """Return ``G_0 .. G_n`` from sample moments via the explicit Legendre formula.

    ``G_i = sqrt((2i+1)/2) sum_k a(i, k) M_(i-2k)`` where ``a(i, k)`` is
    :func:`legproj.legendre.explicit_coefficient`.
    """
    moments = m.moments
    if moments.size < n + 1:
        raise exceptions.CoefficientLengthError(
            "Degree {} needs {} moments, got {}.".format(n, n + 1, moments.size)
        )
    coeffs = [
        legendre.normalization(i)
        * math.fsum(
            legendre.explicit_coefficient(i, k) * moments[i - 2 * k] for k in range(i // 2 + 1)
        )
        for i in range(n + 1)
    ]
    return CoeffVector(CoeffKind.DENSITY, coeffs)


def coeffs_direct(batch, n, chunk_size=constants.ACCUMULATION_CHUNK_SIZE):
    """Return ``G_i = mean of P^_i(xi_l)`` for ``i = 0 .. n``.

    ``P^_0`` is constant, so ``G_0`` is set to it exactly.
    """
    accumulator = CompensatedAccumulator(n + 1)
    _add_polynomial_sums(accumulator, _sample_values(batch), n, chunk_size)
    return _direct_coeffs(accumulator)


def _draw(source, rng, N, method, workers):
    """Yield a sample of size ``N`` from a family or an external sampler.

    A family is sampled ``SAMPLE_CHUNK_SIZE`` realizations at a time, so the
    whole sample is never held in memory. The stream is consumed in order and
    the realizations are the same as those of a single draw.
    """
    if N < 1:
        raise exceptions.EmptySampleError("Sample size must be positive, got {!r}.".format(N))
    if isinstance(source, TestFamilyParams):
        for start in range(0, N, constants.SAMPLE_CHUNK_SIZE):
            size = min(constants.SAMPLE_CHUNK_SIZE, N - start)
            yield sampler.sample(source, rng, size, method=method, workers=workers).values
        return
    values = np.asarray(source(N), dtype=np.float64).ravel()
    if values.size != N:
        raise exceptions.EmptySampleError(
            "External sampler returned {} values instead of {}.".format(values.size, N)
        )
    yield values


def _provenance(rng):
    return (rng.seed, rng.stream_id) if rng is not None else (None, None)


def run_algorithm_1(source, n, N, rng=None, method=SamplingMethod.AUTO, workers=1):
    """Estimate density and distribution function by the moment route.

    :param source: A :class:`legproj.types.TestFamilyParams` or a callable
        returning ``N`` realizations.
    :param n: Expansion length.
    :param N: Sample size.
    :param rng: A :class:`legproj.sampler.RngStream`, needed for a family.
    """
    if n < 0:
        raise ValueError("n must be non-negative, got {!r}.".format(n))
    accumulator = CompensatedAccumulator(n + 2)
    for values in _draw(source, rng, N, method, workers):
        _add_power_sums(accumulator, values, n + 1, constants.ACCUMULATION_CHUNK_SIZE)
    g_coeffs = coeffs_from_moments(MomentVector(accumulator.mean()), n + 1)
    seed, stream_id = _provenance(rng)
    logger.debug("Moment route estimate for n=%s, N=%s", n, N)
    return ProjectionEstimate.from_density_coeffs(
        g_coeffs, N, Algorithm.MOMENT, seed=seed, stream_id=stream_id
    )


def run_algorithm_2(source, n, N, rng=None, method=SamplingMethod.AUTO, workers=1):
    """Estimate density and distribution function by the direct route.

    Same arguments as :func:`run_algorithm_1`.
    """
    if n < 0:
        raise ValueError("n must be non-negative, got {!r}.".format(n))
    accumulator = CompensatedAccumulator(n + 2)
    for values in _draw(source, rng, N, method, workers):
        _add_polynomial_sums(accumulator, values, n + 1, constants.ACCUMULATION_CHUNK_SIZE)
    g_coeffs = _direct_coeffs(accumulator)
    seed, stream_id = _provenance(rng)
    logger.debug("Direct route estimate for n=%s, N=%s", n, N)
    return ProjectionEstimate.from_density_coeffs(
        g_coeffs, N, Algorithm.DIRECT, seed=seed, stream_id=stream_id
    )


def run_algorithm(algorithm, source, n, N, rng=None, method=SamplingMethod.AUTO, workers=1):
    """Dispatch to the route selected by ``algorithm``."""
    if Algorithm(algorithm) is Algorithm.MOMENT:
        return run_algorithm_1(source, n, N, rng, method=method, workers=workers)
    return run_algorithm_2(source, n, N, rng, method=method, workers=workers)


def estimate_error_vs_truth(est, p, m=None, replicate=0):
    """Return the density and distribution :class:`legproj.types.ErrorReport` of an estimate.

    The deterministic part is the exact truncation error of the family, the
    stochastic part ``sqrt(sum (U_i - U~_i) ** 2)`` over ``i = 0 .. n``, and
    the total combines them by Parseval's identity.

    :returns: A ``(density_report, distribution_report)`` tuple.
    """
    det_g, det_f = testfam.deterministic_errors(p, est.n)
    exact = {
        Target.DENSITY: (testfam.exact_density_coeffs(p, est.n).coeffs, det_g),
        Target.DISTRIBUTION: (testfam.exact_distribution_coeffs(p, est.n).coeffs, det_f),
    }
    reports = []
    for target, (coeffs, det) in exact.items():
        estimated = est.coefficients(target).coeffs
        stoch = math.sqrt(math.fsum((coeffs - estimated) ** 2))
        reports.append(
            ErrorReport.from_components(
                det,
                stoch,
                nu1=p.nu1,
                nu2=p.nu2,
                n=est.n,
                m=m,
                N=est.N,
                target=target,
                seed=est.seed,
                replicate=replicate,
            )
        )
    return tuple(reports)


def replicate_statistics(p, n, N, replicates, seed, algorithm=Algorithm.DIRECT, block_size=None):
    """Return the replicate mean and variance of ``G~_0 .. G~_n``.

    Replicate ``r`` uses stream ``r`` of ``seed``.
    """
    if replicates < 2:
        raise ValueError("At least two replicates are needed, got {!r}.".format(replicates))
    block_size = block_size or constants.DEFAULT_BLOCK_SIZE
    estimates = np.empty((replicates, n + 1), dtype=np.float64)
    for replicate in range(replicates):
        rng = sampler.RngStream(seed, stream_id=replicate, block_size=block_size)
        est = run_algorithm(algorithm, p, n, N, rng)
        estimates[replicate] = est.g_coeffs.coeffs[: n + 1]
    logger.debug("Collected %s replicates of n=%s, N=%s", replicates, n, N)
    return estimates.mean(axis=0), estimates.var(axis=0, ddof=1)
