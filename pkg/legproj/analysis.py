# coding=utf-8
"""Error bounds, conditionally optimal parameters and fitted constants.

The squared error of a projection estimate of length ``n`` from ``N``
realizations is bounded by ``c1 n / N + c2 / n ** (2 s)`` for the density and
by the same expression with exponent ``2 s + 2`` for the distribution
function, ``s`` being the Sobolev smoothness of the density.
"""
import logging
import math

import numpy as np
from scipy.optimize import least_squares
from scipy.optimize import nnls
from scipy.special import gammaln

from legproj import exceptions
from legproj.enums import BoundFlavor
from legproj.enums import Target
from legproj.types import BoundConstants
from legproj.types import OptimizationPlan


logger = logging.getLogger(__name__)

_CEIL_TOLERANCE = 1e-12


def _ceil(value):
    """Round up, ignoring excesses at the level of rounding noise."""
    return max(1, math.ceil(value * (1 - _CEIL_TOLERANCE)))


def _exponent(c, target):
    """Return the power of ``n`` in the deterministic term."""
    return 2 * c.s if Target(target) is Target.DENSITY else 2 * c.s + 2


def deterministic_term(c, n, target=Target.DENSITY):
    """Return the squared truncation part of the bound.

    :raises legproj.exceptions.BoundDomainError: for the gamma-ratio flavor
        when ``n - s + 2 <= 0``.
    """
    if c.flavor is BoundFlavor.GAMMA_RATIO:
        s = c.s if Target(target) is Target.DENSITY else c.s + 1
        if n - s + 2 <= 0:
            raise exceptions.BoundDomainError(
                "The gamma ratio needs n - s + 2 > 0, got n={!r}, s={!r}.".format(n, s)
            )
        return c.c2 * math.exp(gammaln(n - s + 2) - gammaln(n + s + 2))
    return c.c2 / n ** _exponent(c, target)


def error_bound(c, n, N, target=Target.DENSITY):
    """Return ``sqrt(c1 n / N + deterministic term)``."""
    if n < 1 or N < 1:
        raise exceptions.BoundDomainError(
            "The bound needs n >= 1 and N >= 1, got n={!r}, N={!r}.".format(n, N)
        )
    return math.sqrt(c.c1 * n / N + deterministic_term(c, n, target))


def optimize(c, gamma, target=Target.DENSITY):
    """Return the cheapest ``(n, N)`` guaranteeing an error bound of ``gamma``.

    Each term of the squared bound is made at most ``gamma ** 2 / 2``:
    ``n_opt = ceil((2 c2 / gamma ** 2) ** (1 / (2 s)))`` and
    ``N_opt = ceil(2 c1 n_opt / gamma ** 2)``, with ``2 s + 2`` in place of
    ``2 s`` for the distribution function. Then ``N_opt`` grows like
    ``n_opt ** (2 s + 1)`` (``n_opt ** (2 s + 3)`` respectively).

    :raises legproj.exceptions.BoundDomainError: if ``gamma`` is not positive
        or the constants use the gamma-ratio flavor, for which no plan is
        derived.
    """
    if not gamma > 0:
        raise exceptions.BoundDomainError("gamma must be positive, got {!r}.".format(gamma))
    if c.flavor is not BoundFlavor.POWER_LAW:
        raise exceptions.BoundDomainError(
            "Plans are only derived for the power-law bound, got {}.".format(c.flavor.value)
        )
    target = Target(target)
    exponent = _exponent(c, target)
    n_real = (2 * c.c2 / gamma**2) ** (1 / exponent)
    n_opt = _ceil(n_real)
    N_real = 2 * c.c1 * n_opt / gamma**2
    plan = OptimizationPlan(
        gamma_target=gamma,
        n_opt=n_opt,
        N_opt=_ceil(N_real),
        relation_exponent=exponent + 1,
        target=target,
        n_real=n_real,
        N_real=2 * c.c1 * n_real / gamma**2,
    )
    logger.debug("Plan for gamma=%s: %s", gamma, plan)
    return plan


def optimize_sequence(c, gammas, target=Target.DENSITY):
    """Return the plans for every accuracy of ``gammas``."""
    return [optimize(c, gamma, target) for gamma in gammas]


def relation_slope(plans, real=False):
    """Return the log-log slope of ``N_opt`` against ``n_opt`` along plans."""
    if real:
        n = [plan.n_real for plan in plans]
        N = [plan.N_real for plan in plans]
    else:
        n = [plan.n_opt for plan in plans]
        N = [plan.N_opt for plan in plans]
    return float(np.polyfit(np.log(n), np.log(N), 1)[0])


def scaling_slope(plans, c, target=Target.DENSITY, real=True):
    """Return the log-log slope of the attained bound against ``N_opt``.

    The bound decays like ``N ** (-s / (2 s + 1))`` along optimal plans for
    the density.
    """
    if real:
        sizes = [plan.N_real for plan in plans]
        bounds = [
            math.sqrt(c.c1 * plan.n_real / plan.N_real + c.c2 / plan.n_real ** _exponent(c, target))
            for plan in plans
        ]
    else:
        sizes = [plan.N_opt for plan in plans]
        bounds = [error_bound(c, plan.n_opt, plan.N_opt, target) for plan in plans]
    return float(np.polyfit(np.log(sizes), np.log(bounds), 1)[0])


def gamma_ratio_relation(c, n):
    """Return ``n Gamma(n + s + 2) / Gamma(n - s + 2)``.

    Balancing the stochastic term against the gamma-ratio truncation term
    makes the sample size proportional to this curve.
    """
    n = np.asarray(n, dtype=np.float64)
    if np.any(n - c.s + 2 <= 0):
        raise exceptions.BoundDomainError("The gamma ratio needs n - s + 2 > 0.")
    return n * np.exp(gammaln(n + c.s + 2) - gammaln(n - c.s + 2))


def _grid_triples(grid):
    triples = []
    for item in grid:
        if hasattr(item, "eps_total"):
            triples.append((item.n, item.N, item.eps_total))
        else:
            triples.append(tuple(item))
    return np.asarray(triples, dtype=np.float64)


def _design(triples, s, target):
    n, N, _ = triples.T
    exponent = 2 * s if Target(target) is Target.DENSITY else 2 * s + 2
    return np.column_stack([n / N, n ** (-exponent)])


def residual_sum_of_squares(c, grid, target=Target.DENSITY):
    """Return ``sum (sqrt(c1 n / N + c2 n ** -e) - eps) ** 2`` over a grid."""
    triples = _grid_triples(grid)
    model = np.sqrt(_design(triples, c.s, target) @ np.array([c.c1, c.c2]))
    return float(np.sum((model - triples[:, 2]) ** 2))


def fit_constants(grid, s, target=Target.DENSITY, refine=True):
    """Fit ``(c1, c2)`` of the power-law bound to observed errors.

    The model is linear in the constants once squared, so a non-negative
    least-squares fit of the squared errors gives the starting point. With
    ``refine`` it is then improved by a bounded least-squares solve on the
    unsquared residuals ``sqrt(c1 n / N + c2 n ** -e) - eps``. The refined
    point is only kept when its residual sum is not larger than the start.

    :param grid: :class:`legproj.types.ErrorReport` items or ``(n, N, eps)``
        triples.
    :param s: Smoothness used in the exponent.
    :raises legproj.exceptions.DegenerateGridError: if the grid has fewer than
        two distinct ``n`` or two distinct ``N``.
    """
    triples = _grid_triples(grid)
    if triples.ndim != 2 or len(set(triples[:, 0])) < 2 or len(set(triples[:, 1])) < 2:
        raise exceptions.DegenerateGridError(
            "Fitting needs at least two distinct n and two distinct N."
        )
    eps = triples[:, 2]
    design = _design(triples, s, target)
    scale = np.linalg.norm(design, axis=0)
    scaled_design = design / scale
    start, _ = nnls(scaled_design, eps**2)

    def model(params):
        return np.sqrt(np.maximum(scaled_design @ params, np.finfo(float).tiny))

    def residuals(params):
        return model(params) - eps

    def jacobian(params):
        return scaled_design / (2 * model(params)[:, None])

    params = start
    if refine:
        result = least_squares(
            residuals,
            start,
            jac=jacobian,
            bounds=(0.0, np.inf),
            method="trf",
            ftol=1e-12,
            xtol=1e-12,
            gtol=1e-12,
        )
        if np.sum(result.fun**2) <= np.sum(residuals(start) ** 2):
            params = np.maximum(result.x, 0.0)
        logger.debug("Bounded refinement: %s after %s evaluations", result.message, result.nfev)
    c1, c2 = params / scale
    logger.debug("Fitted constants c1=%s, c2=%s for s=%s", c1, c2, s)
    return BoundConstants(c1, c2, s, BoundFlavor.POWER_LAW)


def empirical_rate(errors):
    """Return the negated least-squares slope of ``log eps`` against ``log n``.

    :param errors: A sequence of ``(n, eps)`` pairs with ``n`` strictly
        increasing.
    """
    pairs = np.asarray(list(errors), dtype=np.float64)
    if pairs.ndim != 2 or pairs.shape[0] < 3:
        raise ValueError("At least three (n, eps) pairs are needed.")
    n, eps = pairs.T
    if np.any(np.diff(n) <= 0):
        raise ValueError("n must be strictly increasing.")
    if np.any(eps <= 0):
        raise ValueError("Errors must be positive to take logarithms.")
    return -float(np.polyfit(np.log(n), np.log(eps), 1)[0])


def optimal_diagonal(reports, target=Target.DENSITY):
    """Return ``{n: m}`` with the smallest ``m`` balancing the two error parts.

    The total error keeps decreasing with ``m``, but once the stochastic part
    drops below the truncation error a larger sample buys little. The
    returned ``m`` is the first one where the replicate mean of ``eps_stoch``
    is at most ``eps_det``. Lengths whose grid never gets there are left
    out.
    """
    target = Target(target)
    cells = {}
    for report in reports:
        if report.target is target:
            cells.setdefault((report.n, report.m), []).append(report)
    diagonal = {}
    for (n, m), group in sorted(cells.items()):
        if n in diagonal:
            continue
        stoch = sum(report.eps_stoch for report in group) / len(group)
        if stoch <= group[0].eps_det:
            diagonal[n] = m
    return diagonal
