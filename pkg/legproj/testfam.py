# coding=utf-8
"""Exact machinery for the two-parameter test density family.

The density is ``gamma * (1 - (-x) ** nu1)`` on ``[-1, 0)`` and
``gamma * (1 - x ** nu2)`` on ``[0, 1]``. Its Legendre coefficients, squared
norms and truncation errors are all rational up to the normalization factors
``sqrt((2 i + 1) / 2)``, so they are computed with :class:`fractions.Fraction`
and only converted to floats at the end.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from legproj import exceptions
from legproj import legendre
from legproj.enums import CoeffKind
from legproj.types import CoeffVector
from legproj.types import QTable
from legproj.types import TestFamilyParams
from legproj.utils import checked_sqrt


logger = logging.getLogger(__name__)

__all__ = [
    "TestFamilyParams",
    "build_q_table",
    "density",
    "deterministic_errors",
    "distribution",
    "exact_density_coeffs",
    "exact_distribution_coeffs",
    "indicator_slobodetskij_integral",
    "indicator_slobodetskij_quadrature",
    "moments",
    "reflection_coefficients",
    "squared_norms",
    "squared_norms_exact",
]


def _unwrap(values):
    if np.ndim(values) == 0:
        return float(values)
    return values


def density(p, x):
    """Return the test density at ``x`` (zero outside of ``[-1, 1]``)."""
    points = np.asarray(x, dtype=np.float64)
    left = p.gamma * (1 - (-points) ** p.nu1)
    right = p.gamma * (1 - points**p.nu2)
    values = np.where(points < 0, left, right)
    return _unwrap(np.where(np.abs(points) > 1, 0.0, values))


def distribution(p, x):
    """Return the test distribution function at ``x``.

    On ``[-1, 0]`` it is ``gamma (x + a + (-x) ** (nu1 + 1) / (nu1 + 1))`` and on
    ``[0, 1]`` it is ``gamma (a + x - x ** (nu2 + 1) / (nu2 + 1))``, with
    ``a = nu1 / (nu1 + 1)``. It is zero below ``-1`` and one above ``1``.
    """
    points = np.asarray(x, dtype=np.float64)
    a = p.nu1 / (p.nu1 + 1)
    left = p.gamma * (points + a + (-points) ** (p.nu1 + 1) / (p.nu1 + 1))
    right = p.gamma * (a + points - points ** (p.nu2 + 1) / (p.nu2 + 1))
    values = np.where(points < 0, left, right)
    values = np.where(points < -1, 0.0, np.where(points > 1, 1.0, values))
    return _unwrap(values)


@lru_cache(maxsize=None)
def build_q_table(numax, imax):
    """Return the exact integrals of ``x ** nu * P_i`` over both half intervals.

    The zeroth row follows from ``P_i(0)`` and the parity of ``P_i``; the
    other rows come from ``x P_i = ((i + 1) P_(i+1) + i P_(i-1)) / (2 i + 1)``,
    which reads index ``i + 1`` of the previous row. Rows are therefore built
    ``numax`` columns wider than requested and trimmed afterwards.

    :param numax: Largest power ``nu``.
    :param imax: Largest degree ``i``.
    :returns: A :class:`legproj.types.QTable`.
    """
    if numax < 0 or imax < 0:
        raise ValueError("numax and imax must be non-negative, got {!r}.".format((numax, imax)))
    width = imax + numax + 1
    plus = [Fraction(1), Fraction(1, 2)] + [Fraction(0)] * (width - 2)
    for i in range(3, width, 2):
        plus[i] = Fraction(2 - i, i + 1) * plus[i - 2]
    plus = plus[:width]
    minus = [value if i % 2 == 0 else -value for i, value in enumerate(plus)]

    minus_rows, plus_rows = [minus], [plus]
    for nu in range(1, numax + 1):
        size = width - nu
        rows = []
        for previous in (minus_rows[-1], plus_rows[-1]):
            row = []
            for i in range(size):
                lower = previous[i - 1] if i > 0 else 0
                row.append(((i + 1) * previous[i + 1] + i * lower) / (2 * i + 1))
            rows.append(row)
        minus_rows.append(rows[0])
        plus_rows.append(rows[1])

    logger.debug("Built Q table for numax=%s, imax=%s", numax, imax)
    return QTable(
        numax=numax,
        imax=imax,
        minus=tuple(tuple(row[: imax + 1]) for row in minus_rows),
        plus=tuple(tuple(row[: imax + 1]) for row in plus_rows),
    )


def reflection_coefficients(nu, n):
    """Return the integrals of ``x ** nu * P_i`` on ``[-1, 0]`` and ``[0, 1]``.

    Uses the single-row recursion
    ``Q_(nu, i+1) = (nu - i + 1) / (nu + i + 2) Q_(nu, i-1)`` together with the
    reflection ``x -> -x``, which relates the two halves by ``(-1) ** (nu + i)``.
    The magnitudes on both halves coincide.
    """
    minus = [Fraction((-1) ** nu, nu + 1), Fraction((-1) ** (nu + 1), nu + 2)]
    for i in range(1, n):
        minus.append(Fraction(nu - i + 1, nu + i + 2) * minus[i - 1])
    minus = minus[: n + 1]
    plus = [value * (-1) ** (nu + i) for i, value in enumerate(minus)]
    return minus, plus


def _density_brackets(p, n):
    table = build_q_table(max(p.nu1, p.nu2), n)
    sign = (-1) ** p.nu1
    return [
        table.minus[0][i] - sign * table.minus[p.nu1][i] + table.plus[0][i] - table.plus[p.nu2][i]
        for i in range(n + 1)
    ]


def _distribution_brackets(p, n):
    table = build_q_table(max(p.nu1, p.nu2) + 1, n)
    a = Fraction(p.nu1, p.nu1 + 1)
    left = Fraction((-1) ** (p.nu1 + 1), p.nu1 + 1)
    right = Fraction(1, p.nu2 + 1)
    return [
        a * table.minus[0][i]
        + table.minus[1][i]
        + left * table.minus[p.nu1 + 1][i]
        + a * table.plus[0][i]
        + table.plus[1][i]
        - right * table.plus[p.nu2 + 1][i]
        for i in range(n + 1)
    ]


def _coefficients(p, brackets):
    gamma = p.gamma_exact
    return [
        float(gamma * bracket) * legendre.normalization(i) for i, bracket in enumerate(brackets)
    ]


def _squared_coefficient_sum(p, brackets):
    gamma = p.gamma_exact
    return sum(gamma**2 * Fraction(2 * i + 1, 2) * bracket**2 for i, bracket in enumerate(brackets))


def exact_density_coeffs(p, n):
    """Return the Legendre coefficients ``G_0 .. G_n`` of the test density."""
    if n < 0:
        raise ValueError("n must be non-negative, got {!r}.".format(n))
    return CoeffVector(CoeffKind.DENSITY, _coefficients(p, _density_brackets(p, n)))


def exact_distribution_coeffs(p, n):
    """Return the Legendre coefficients ``F_0 .. F_n`` of the test distribution function."""
    if n < 0:
        raise ValueError("n must be non-negative, got {!r}.".format(n))
    return CoeffVector(CoeffKind.DISTRIBUTION, _coefficients(p, _distribution_brackets(p, n)))


def _polynomial_square_integral(poly):
    """Return the integral over ``[0, 1]`` of the square of ``{power: coeff}``."""
    total = Fraction(0)
    for power_a, coeff_a in poly.items():
        for power_b, coeff_b in poly.items():
            total += coeff_a * coeff_b / (power_a + power_b + 1)
    return total


def _add_term(poly, power, coeff):
    poly[power] = poly.get(power, Fraction(0)) + coeff


def squared_norms_exact(p):
    """Return ``(integral of g ** 2, integral of f ** 2)`` as exact fractions."""
    gamma = p.gamma_exact

    def half(nu):
        return 1 - Fraction(2, nu + 1) + Fraction(1, 2 * nu + 1)

    norm_g = gamma**2 * (half(p.nu1) + half(p.nu2))

    a = Fraction(p.nu1, p.nu1 + 1)
    # left half written in t = -x
    left = {}
    _add_term(left, 0, a)
    _add_term(left, 1, Fraction(-1))
    _add_term(left, p.nu1 + 1, Fraction(1, p.nu1 + 1))
    right = {}
    _add_term(right, 0, a)
    _add_term(right, 1, Fraction(1))
    _add_term(right, p.nu2 + 1, Fraction(-1, p.nu2 + 1))
    norm_f = gamma**2 * (_polynomial_square_integral(left) + _polynomial_square_integral(right))
    return norm_g, norm_f


def squared_norms(p):
    """Return ``(integral of g ** 2, integral of f ** 2)`` as floats."""
    norm_g, norm_f = squared_norms_exact(p)
    return float(norm_g), float(norm_f)


def deterministic_errors(p, n):
    """Return the truncation errors ``(eps_g, eps_f)`` of the length ``n`` expansions.

    Each error is ``sqrt(norm ** 2 - sum of squared coefficients)``. The
    radicand is formed exactly, so no cancellation occurs even when the
    error is many orders below the norm.

    :raises legproj.exceptions.NegativeRadicandError: if a radicand is below
        ``-1e-14``.
    """
    norm_g, norm_f = squared_norms_exact(p)
    eps_g = checked_sqrt(
        norm_g - _squared_coefficient_sum(p, _density_brackets(p, n)),
        "the density truncation error of {} at n={}".format(p.key, n),
    )
    eps_f = checked_sqrt(
        norm_f - _squared_coefficient_sum(p, _distribution_brackets(p, n)),
        "the distribution truncation error of {} at n={}".format(p.key, n),
    )
    return eps_g, eps_f


def moments(p, kmax):
    """Return the exact initial moments ``E xi ** k`` for ``k = 0 .. kmax``."""
    gamma = p.gamma_exact
    result = []
    for k in range(kmax + 1):
        left = (-1) ** k * (Fraction(1, k + 1) - Fraction(1, k + p.nu1 + 1))
        right = Fraction(1, k + 1) - Fraction(1, k + p.nu2 + 1)
        result.append(gamma * (left + right))
    return result


def indicator_slobodetskij_integral(sigma):
    """Return the Slobodetskij double integral of the indicator of ``[0, 1]``.

    The value is ``2 (2 ** (-2 sigma) - 1) / (sigma (2 sigma - 1))`` for
    ``sigma < 1/2``. The integral diverges for ``sigma >= 1/2``, which is
    reported as ``math.inf``.

    :raises legproj.exceptions.BoundDomainError: if ``sigma`` is not in ``(0, 1)``.
    """
    if not 0 < sigma < 1:
        raise exceptions.BoundDomainError("sigma must lie in (0, 1), got {!r}.".format(sigma))
    if sigma >= 0.5:
        logger.debug("Slobodetskij integral of the indicator diverges at sigma=%s", sigma)
        return math.inf
    return 2 * (2 ** (-2 * sigma) - 1) / (sigma * (2 * sigma - 1))


def indicator_slobodetskij_quadrature(sigma):
    """Return the same double integral computed by adaptive quadrature.

    Only the pairs ``x < 0 <= y`` contribute, twice by symmetry, with the
    integrand ``(y - x) ** (-1 - 2 sigma)``.
    """
    if not 0 < sigma < 0.5:
        raise exceptions.BoundDomainError(
            "The quadrature only converges for sigma in (0, 1/2), got {!r}.".format(sigma)
        )
    value, abserr = integrate.dblquad(
        lambda y, x: (y - x) ** (-1 - 2 * sigma),
        -1.0,
        0.0,
        0.0,
        1.0,
        epsabs=1e-10,
        epsrel=1e-8,
    )
    logger.debug("Slobodetskij quadrature at sigma=%s: %s (+- %s)", sigma, 2 * value, abserr)
    return 2 * value
