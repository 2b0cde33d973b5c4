# coding=utf-8
"""Standardized and normalized Legendre polynomials on ``[-1, 1]``.

``P_i`` denotes the standardized polynomial (``P_i(1) = 1``) and ``P^_i`` the
normalized one, ``P^_i = sqrt((2 i + 1) / 2) * P_i``, which has unit norm in
``L2(-1, 1)``. Every evaluation routine accepts a scalar or a numpy array of
points; scalars produce floats.
"""
import logging
import math
import warnings
from fractions import Fraction
from functools import lru_cache

import numpy as np
from attrs import field
from attrs import frozen
from numpy.polynomial.legendre import leggauss
from scipy.special import gammaln

from legproj import constants
from legproj import exceptions
from legproj.enums import CoeffKind
from legproj.enums import EvalMode
from legproj.types import CoeffVector


logger = logging.getLogger(__name__)


def _as_points(x):
    points = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(points) > 1):
        warnings.warn(
            "Evaluating Legendre polynomials outside of [-1, 1].", exceptions.OutOfDomainWarning
        )
    return points


def _unwrap(values):
    if np.ndim(values) == 0:
        return float(values)
    return values


def normalization(i):
    """Return the factor ``sqrt((2 i + 1) / 2)`` turning ``P_i`` into ``P^_i``."""
    return math.sqrt((2 * i + 1) / 2)


def _standardized_sweep(n, points):
    values = np.empty((n + 1,) + points.shape, dtype=np.float64)
    values[0] = 1.0
    if n >= 1:
        values[1] = points
    for i in range(1, n):
        values[i + 1] = ((2 * i + 1) * points * values[i] - i * values[i - 1]) / (i + 1)
    return values


def eval_standardized(i, x):
    """Return ``P_i(x)`` computed by the three-term recurrence.

    :param i: A non-negative integer degree.
    :param x: A point or an array of points. Points outside of ``[-1, 1]``
        are evaluated but trigger :class:`legproj.exceptions.OutOfDomainWarning`.
    """
    if i < 0:
        raise ValueError("Degree must be non-negative, got {!r}.".format(i))
    return _unwrap(_standardized_sweep(i, _as_points(x))[i])


def eval_normalized_all(n, x):
    """Return ``[P^_0(x), ..., P^_n(x)]`` from a single recurrence sweep.

    The result has shape ``(n + 1,) + shape(x)``. Element ``i`` does not
    depend on ``n``, so it matches :func:`eval_normalized` bit for bit.
    """
    if n < 0:
        raise ValueError("Degree must be non-negative, got {!r}.".format(n))
    values = _standardized_sweep(n, _as_points(x))
    values[0] *= constants.NORMALIZED_P0
    for i in range(1, n + 1):
        values[i] *= normalization(i)
    return values


def eval_normalized(i, x):
    """Return ``P^_i(x) = sqrt((2 i + 1) / 2) * P_i(x)``."""
    return _unwrap(eval_normalized_all(i, x)[i])


def _check_term(i, k):
    if i < 0 or k < 0 or k > i // 2:
        raise exceptions.ExplicitTermError(
            "Term index {!r} is outside of 0..{} for degree {!r}.".format(k, max(i, 0) // 2, i)
        )


@lru_cache(maxsize=None)
def explicit_coefficient_exact(i, k):
    """Return the coefficient of ``x ** (i - 2 k)`` in ``P_i(x)`` as a fraction."""
    _check_term(i, k)
    magnitude = Fraction(math.comb(i, k) * math.comb(2 * i - 2 * k, i), 2**i)
    return -magnitude if k % 2 else magnitude


@lru_cache(maxsize=None)
def explicit_coefficient(i, k):
    """Return the coefficient of ``x ** (i - 2 k)`` in ``P_i(x)``.

    The coefficient is ``(-1) ** k (2 i - 2 k)! / (2 ** i k! (i - k)! (i - 2 k)!)``.
    Up to degree :data:`legproj.constants.EXPLICIT_EXACT_MAX_DEGREE` it is
    rounded from exact integer binomials, above it formed through log-gamma so
    that no factorial ever overflows.

    :raises legproj.exceptions.ExplicitTermError: if ``k`` is outside of
        ``0 .. i // 2``.
    """
    _check_term(i, k)
    if i <= constants.EXPLICIT_EXACT_MAX_DEGREE:
        return float(explicit_coefficient_exact(i, k))
    log_magnitude = (
        gammaln(2 * i - 2 * k + 1)
        - gammaln(k + 1)
        - gammaln(i - k + 1)
        - gammaln(i - 2 * k + 1)
        - i * math.log(2)
    )
    return (-1) ** k * math.exp(log_magnitude)


def eval_standardized_explicit(i, x):
    """Return ``P_i(x)`` as the explicit sum of monomials.

    Each point is converted to an exact fraction and the sum is evaluated by
    Horner's scheme in ``x ** 2`` without rounding, so the result is
    correctly rounded at any degree. Terms reach ``10 ** 6`` already at
    ``i = 20`` and a float sum would lose most of its digits. This is slow and
    only meant for cross-checking the recurrence.
    """
    _check_term(i, 0)
    points = _as_points(x)
    terms = [explicit_coefficient_exact(i, k) for k in range(i // 2 + 1)]

    def exact_value(point):
        point = Fraction(float(point))
        square = point * point
        total = Fraction(0)
        for term in terms:
            total = total * square + term
        return float(total * point if i % 2 else total)

    values = np.array([exact_value(point) for point in points.ravel()], dtype=np.float64)
    return _unwrap(values.reshape(points.shape))


@frozen
class BasisEval:
    """Evaluation context for the normalized basis up to ``max_degree``.

    :param max_degree: The largest degree ``n`` evaluated.
    :param mode: Either the three-term recurrence (default) or the explicit
        monomial formula.
    """

    max_degree: int = field()
    mode: EvalMode = EvalMode.RECURRENCE

    @max_degree.validator
    def _check_max_degree(self, attribute, value):
        if value < 0:
            raise ValueError("max_degree must be non-negative, got {!r}.".format(value))

    def standardized(self, i, x):
        """Return ``P_i(x)`` with the configured strategy."""
        if self.mode is EvalMode.EXPLICIT:
            return eval_standardized_explicit(i, x)
        return eval_standardized(i, x)

    def evaluate(self, x):
        """Return ``[P^_0(x), ..., P^_n(x)]`` with the configured strategy."""
        if self.mode is EvalMode.RECURRENCE:
            return eval_normalized_all(self.max_degree, x)
        return np.stack(
            [
                normalization(i) * np.asarray(eval_standardized_explicit(i, x))
                for i in range(self.max_degree + 1)
            ]
        )


def eval_series(c, x):
    """Return ``sum_i c_i P^_i(x)`` for a :class:`legproj.types.CoeffVector`.

    The represented functions live on ``[-1, 1]``: outside of it a density
    evaluates to zero and a distribution function to zero on the left and
    one on the right.
    """
    points = np.asarray(x, dtype=np.float64)
    inside = np.clip(points, -1.0, 1.0)
    values = np.tensordot(c.coeffs, eval_normalized_all(c.n, inside), axes=1)
    if c.kind is CoeffKind.DENSITY:
        values = np.where(np.abs(points) > 1, 0.0, values)
    else:
        values = np.where(points < -1, 0.0, np.where(points > 1, 1.0, values))
    return _unwrap(values)


def antiderivative_transform(c):
    """Turn density coefficients into distribution function coefficients.

    ``F_0 = G_0 - G_1 / sqrt(3)`` and, for ``i >= 1``,
    ``F_i = G_(i-1) / sqrt((2i-1)(2i+1)) - G_(i+1) / sqrt((2i+1)(2i+3))``.

    :param c: A density :class:`legproj.types.CoeffVector` with ``n + 2``
        coefficients.
    :returns: A distribution :class:`legproj.types.CoeffVector` with ``n + 1``
        coefficients.
    :raises legproj.exceptions.CoefficientLengthError: if fewer than two
        coefficients are given.
    """
    if c.kind is not CoeffKind.DENSITY:
        raise ValueError("Expected density coefficients, got {}.".format(c.kind.value))
    g = c.coeffs
    if g.size < 2:
        raise exceptions.CoefficientLengthError(
            "The transform needs n + 2 density coefficients, got {}.".format(g.size)
        )
    n = g.size - 2
    f = np.empty(n + 1, dtype=np.float64)
    f[0] = g[0] - g[1] / math.sqrt(3)
    i = np.arange(1, n + 1, dtype=np.float64)
    f[1:] = g[: n] / np.sqrt((2 * i - 1) * (2 * i + 1)) - g[2:] / np.sqrt((2 * i + 1) * (2 * i + 3))
    return CoeffVector(CoeffKind.DISTRIBUTION, f)


def antiderivative_normalized(i, x):
    """Return ``integral from -1 to x of P^_i`` in closed form."""
    if i == 0:
        values = eval_normalized_all(1, x)
        return _unwrap(values[0] + values[1] / math.sqrt(3))
    values = eval_normalized_all(i + 1, x)
    return _unwrap(
        values[i + 1] / math.sqrt((2 * i + 1) * (2 * i + 3))
        - values[i - 1] / math.sqrt((2 * i - 1) * (2 * i + 1))
    )


@lru_cache(maxsize=32)
def gauss_legendre(nodes):
    """Return Gauss-Legendre nodes and weights on ``[-1, 1]``."""
    logger.debug("Computing %s Gauss-Legendre nodes", nodes)
    x, w = leggauss(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def inner_product(func, i, nodes=256, breakpoints=()):
    """Return ``integral of func * P^_i`` over ``[-1, 1]`` by Gauss-Legendre quadrature.

    With ``breakpoints`` the interval is split and every piece receives its
    own rule, the ``nodes`` being shared evenly between the pieces. The rule
    on a piece is exact for polynomials of degree below twice its node count.
    """
    edges = [-1.0] + sorted(float(point) for point in breakpoints) + [1.0]
    x, w = gauss_legendre(nodes // (len(edges) - 1))
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        half = (right - left) / 2
        points = left + half * (x + 1)
        values = np.asarray(func(points)) * eval_normalized_all(i, points)[i]
        total += half * float(np.sum(w * values))
    return total
