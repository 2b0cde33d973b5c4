# coding=utf-8
"""Realizations of the test family random variable by the inverse function method.

A realization is ``xi = f^-1(alpha)`` with ``alpha`` uniform on ``(0, 1)``.
The generic path solves ``f(xi) = alpha`` with a bracketed Newton iteration;
the families ``(1, 2)`` and ``(3, 2)`` also have closed-form inverses built on
Cardano's and Ferrari's formulas.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import stats

from legproj import constants
from legproj import exceptions
from legproj import testfam
from legproj.enums import SamplingMethod
from legproj.types import SampleBatch
from legproj.types import TestFamilyParams


logger = logging.getLogger(__name__)

_FAMILY_12 = TestFamilyParams(1, 2)
_FAMILY_32 = TestFamilyParams(3, 2)


class RngStream(object):
    """A reproducible stream of uniforms on the open interval ``(0, 1)``.

    The stream is cut into blocks of ``block_size`` numbers. Block ``b`` is
    produced by a Philox generator keyed by ``SeedSequence(seed,
    spawn_key=(stream_id, b))``, so any block can be generated on its own and
    the uniforms at a given position never depend on how the blocks were
    shared between workers.

    :param seed: A non-negative integer of at most 64 bits.
    :param stream_id: A non-negative integer selecting an independent stream.
    :param block_size: Uniforms per block.
    """

    def __init__(self, seed, stream_id=0, block_size=constants.DEFAULT_BLOCK_SIZE):
        """Initialize a new object."""
        if seed < 0 or stream_id < 0:
            raise ValueError("seed and stream_id must be non-negative.")
        if block_size < 1:
            raise ValueError("block_size must be positive, got {!r}.".format(block_size))
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.block_size = int(block_size)
        self.position = 0

    def __repr__(self):
        """Provide an ``eval``-compatible string representation."""
        return "RngStream(seed={!r}, stream_id={!r}, block_size={!r})".format(
            self.seed, self.stream_id, self.block_size
        )

    def block(self, index):
        """Return the uniforms of block ``index``."""
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, index))
        raw = np.random.Philox(sequence).random_raw(self.block_size)
        return ((raw >> np.uint64(12)).astype(np.float64) + 0.5) / 2.0**52

    def uniforms_at(self, start, count, workers=1):
        """Return ``count`` uniforms starting at position ``start``.

        Blocks are produced concurrently when ``workers > 1``; they are always
        concatenated in counter order.
        """
        if count < 1:
            return np.empty(0, dtype=np.float64)
        first = start // self.block_size
        last = (start + count - 1) // self.block_size
        indices = range(first, last + 1)
        if workers > 1 and len(indices) > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                blocks = list(executor.map(self.block, indices))
        else:
            blocks = [self.block(index) for index in indices]
        offset = start - first * self.block_size
        return np.concatenate(blocks)[offset : offset + count]

    def uniforms(self, count, workers=1):
        """Return the next ``count`` uniforms and advance the stream."""
        values = self.uniforms_at(self.position, count, workers=workers)
        self.position += count
        return values


def _endpoint_distance(nu, gamma, mass):
    """Return ``d`` with ``gamma * int_0^d (1 - (1 - t) ** nu) dt = mass``.

    This is the probability carried by the last ``d`` of the interval on a
    side with exponent ``nu``. The integral is summed as a polynomial in
    ``d`` so that it keeps full relative precision when ``d`` is tiny.
    """
    mass = np.asarray(mass, dtype=np.float64)
    terms = [math.comb(nu, j) * (-1) ** (j + 1) / (j + 1) for j in range(1, nu + 1)]
    distance = np.sqrt(2 * mass / (gamma * nu))
    for _ in range(constants.TAIL_NEWTON_ITERATIONS):
        value = gamma * distance**2 * np.polynomial.polynomial.polyval(distance, terms)
        slope = -gamma * np.expm1(nu * np.log1p(-distance))
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(slope > 0, (value - mass) / slope, 0.0)
        distance = distance - step
    return distance


def _invert_with_tails(p, alpha, bulk):
    """Apply ``bulk`` away from the ends of ``(0, 1)`` and endpoint expansions near them.

    The result is clipped to the open interval ``(-1, 1)``.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    xi = np.empty_like(alpha)
    low = alpha < constants.INVERSION_TAIL
    high = alpha > 1 - constants.INVERSION_TAIL
    middle = ~(low | high)
    if np.any(middle):
        xi[middle] = bulk(alpha[middle])
    xi[low] = -1 + _endpoint_distance(p.nu1, p.gamma, alpha[low])
    xi[high] = 1 - _endpoint_distance(p.nu2, p.gamma, 1 - alpha[high])
    return np.clip(xi, np.nextafter(-1.0, 0.0), np.nextafter(1.0, 0.0))


def invert_generic(p, alpha):
    """Solve ``distribution(p, xi) = alpha`` for every item of ``alpha``.

    Values below ``f(0)`` are bracketed by ``(-1, 0)``, the others by
    ``[0, 1)``. Each iteration takes a Newton step when it stays inside the
    current bracket and bisects otherwise, until the residual is at most
    ``1e-13`` or the bracket is narrower than ``1e-14``. Probabilities within
    ``1e-8`` of zero or one are inverted from the endpoint expansion instead,
    and every root lies strictly inside ``(-1, 1)``.

    :raises legproj.exceptions.RootFinderError: after 200 iterations without
        convergence.
    """
    return _invert_with_tails(p, alpha, lambda bulk: _invert_bracketed(p, bulk))


def _invert_bracketed(p, alpha):
    left = alpha < p.f_at_zero
    lo = np.where(left, -1.0, 0.0)
    hi = np.where(left, 0.0, 1.0)
    x = (lo + hi) / 2
    for iteration in range(constants.ROOT_MAX_ITERATIONS):
        residual = testfam.distribution(p, x) - alpha
        residual = np.atleast_1d(residual)
        done = (np.abs(residual) <= constants.ROOT_RESIDUAL_TOLERANCE) | (
            hi - lo <= constants.ROOT_WIDTH_TOLERANCE
        )
        if np.all(done):
            logger.debug(
                "Root finder converged after %s iterations for %s values", iteration, x.size
            )
            return x
        lo = np.where(residual < 0, x, lo)
        hi = np.where(residual > 0, x, hi)
        slope = np.atleast_1d(testfam.density(p, x))
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - residual / slope
        inside = np.isfinite(newton) & (newton > lo) & (newton < hi)
        x = np.where(done, x, np.where(inside, newton, (lo + hi) / 2))
    worst = int(np.argmax(np.abs(residual)))
    raise exceptions.RootFinderError(
        "No convergence after {} iterations for alpha={!r} (bracket [{!r}, {!r}]).".format(
            constants.ROOT_MAX_ITERATIONS, float(alpha[worst]), float(lo[worst]), float(hi[worst])
        )
    )


def _cubic_branch(z_real, z_radicand):
    """Return ``-Re A + sqrt(3) Im A`` with ``A`` the principal cube root of ``z``."""
    z = z_real + np.sqrt(z_radicand.astype(np.complex128))
    root = z ** (1 / 3)
    angle = np.angle(root)
    assert np.all((angle >= math.pi / 6 - 1e-9) & (angle <= math.pi / 3 + 1e-9)), angle
    return -root.real + math.sqrt(3) * root.imag


def invert_closed_12(alpha):
    """Return the inverse distribution function of the ``(1, 2)`` family."""
    return _invert_with_tails(_FAMILY_12, alpha, _closed_12)


def _closed_12(alpha):
    xi = np.empty_like(alpha)
    low = alpha < 3 / 7
    xi[low] = np.sqrt(7 * alpha[low] / 3) - 1
    high = alpha[~low]
    xi[~low] = _cubic_branch((3 - 7 * high) / 4, (7 * high - 3) ** 2 / 16 - 1)
    return xi


def invert_closed_32(alpha):
    """Return the inverse distribution function of the ``(3, 2)`` family.

    Below ``f(0) = 9/17`` the quartic ``x^4 + 4x + (9 - 17 alpha) / 3 = 0`` is
    solved with Ferrari's resolvent and real cube roots; above it the
    depressed cubic is solved as for the ``(1, 2)`` family. Both lose their
    precision next to the ends of the interval, where the endpoint expansion
    of :func:`invert_generic` takes over.
    """
    return _invert_with_tails(_FAMILY_32, alpha, _closed_32)


def _closed_32(alpha):
    xi = np.empty_like(alpha)
    low = alpha < 9 / 17
    q = 17 * alpha[low] - 9
    omega = np.cbrt(1 + np.sqrt(np.maximum(1 + q**3 / 729, 0.0)))
    y = omega - q / (9 * omega)
    xi[low] = -np.sqrt(y / 2) + np.sqrt(np.maximum(-y / 2 + np.sqrt(2 / y), 0.0))
    high = alpha[~low]
    xi[~low] = _cubic_branch((9 - 17 * high) / 8, (17 * high - 9) ** 2 / 64 - 1)
    return xi


def _batch(values, p, rng):
    return SampleBatch(values, params=p, seed=rng.seed, stream_id=rng.stream_id)


def _check_count(N):
    if N < 1:
        raise exceptions.EmptySampleError("Sample size must be positive, got {!r}.".format(N))


def sample_generic(p, rng, N, workers=1):
    """Draw ``N`` realizations with the bracketed Newton inversion."""
    _check_count(N)
    logger.debug("Sampling %s values of %s with the root finder", N, p.key)
    return _batch(invert_generic(p, rng.uniforms(N, workers=workers)), p, rng)


def sample_closed_12(rng, N, workers=1):
    """Draw ``N`` realizations of the ``(1, 2)`` family from the closed-form inverse."""
    _check_count(N)
    logger.debug("Sampling %s values of (1, 2) in closed form", N)
    return _batch(invert_closed_12(rng.uniforms(N, workers=workers)), _FAMILY_12, rng)


def sample_closed_32(rng, N, workers=1):
    """Draw ``N`` realizations of the ``(3, 2)`` family from the closed-form inverse."""
    _check_count(N)
    logger.debug("Sampling %s values of (3, 2) in closed form", N)
    return _batch(invert_closed_32(rng.uniforms(N, workers=workers)), _FAMILY_32, rng)


_CLOSED_FORMS = {
    (1, 2): sample_closed_12,
    (3, 2): sample_closed_32,
}


def sample(p, rng, N, method=SamplingMethod.AUTO, workers=1):
    """Draw ``N`` realizations of family ``p``.

    :param method: ``AUTO`` uses a closed form where one exists and the root
        finder otherwise. ``CLOSED`` insists on a closed form.
    """
    closed = _CLOSED_FORMS.get(p.key)
    if method is SamplingMethod.CLOSED and closed is None:
        raise exceptions.FamilyParameterError("No closed-form inverse for family {}.".format(p.key))
    if method is SamplingMethod.GENERIC or closed is None:
        return sample_generic(p, rng, N, workers=workers)
    return closed(rng, N, workers=workers)


def ks_statistic(batch, p=None):
    """Return the Kolmogorov-Smirnov statistic and p-value of a batch.

    The batch is compared against the distribution function of its family
    (or of ``p`` when given).
    """
    p = p or batch.params
    result = stats.kstest(batch.values, lambda x: testfam.distribution(p, x))
    return float(result.statistic), float(result.pvalue)


def write_samples(batch, path):
    """Write a batch as newline-delimited floats after a ``#`` header line.

    :raises legproj.exceptions.SampleFileError: if the file cannot be written.
    """
    header = "# nu1={} nu2={} seed={} stream={} count={}\n".format(
        batch.params.nu1, batch.params.nu2, batch.seed, batch.stream_id, batch.N
    )
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handler:
            handler.write(header)
            for value in batch.values:
                handler.write(repr(float(value)) + "\n")
    except OSError as err:
        raise exceptions.SampleFileError(path, err.strerror or str(err)) from err
    logger.debug("Wrote %s samples to %s", batch.N, path)


def read_samples(path):
    """Read a file written by :func:`write_samples` back into a batch.

    :raises legproj.exceptions.SampleFileError: if the file cannot be read or
        its header is malformed.
    """
    try:
        with open(path, encoding="utf-8") as handler:
            header = handler.readline()
            values = [float(line) for line in handler if line.strip()]
    except OSError as err:
        raise exceptions.SampleFileError(path, err.strerror or str(err)) from err
    except ValueError as err:
        raise exceptions.SampleFileError(path, "non-numeric sample ({})".format(err)) from err
    if not header.startswith("#"):
        raise exceptions.SampleFileError(path, "missing header line")
    try:
        fields = dict(item.split("=", 1) for item in header[1:].split())
        params = TestFamilyParams(int(fields["nu1"]), int(fields["nu2"]))
        seed = None if fields["seed"] == "None" else int(fields["seed"])
        stream = None if fields["stream"] == "None" else int(fields["stream"])
    except (KeyError, ValueError) as err:
        raise exceptions.SampleFileError(
            path, "malformed header {!r}".format(header.strip())
        ) from err
    if int(fields.get("count", len(values))) != len(values):
        raise exceptions.SampleFileError(
            path, "header announces {} samples, found {}".format(fields["count"], len(values))
        )
    return SampleBatch(values, params=params, seed=seed, stream_id=stream)
