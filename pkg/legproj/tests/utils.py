# coding=utf-8
"""Utility functions for the statistical sweeps."""
import numpy as np
import pytest

from legproj import legendre
from legproj import testfam
from legproj.utils import run_sweeps

mark_runs_sweeps = pytest.mark.skipif(run_sweeps() is False, reason="RUN_SWEEPS set to False")
"""Decorator that skips tests if RUN_SWEEPS environment variable is 'False'."""

GRID_N = (4, 8, 16, 32, 64)

SWEEP_MAX_M = 14

PUBLISHED_DENSITY_GRIDS = {
    (1, 2): (
        (0.065300, 0.068625, 0.119784, 0.168044, 0.209996),
        (0.029999, 0.020867, 0.064303, 0.107275, 0.144097),
        (0.026360, 0.031022, 0.046008, 0.061732, 0.093907),
        (0.035117, 0.028862, 0.036685, 0.045302, 0.064636),
        (0.028603, 0.020236, 0.026896, 0.035032, 0.050834),
        (0.025879, 0.015305, 0.018405, 0.025655, 0.034847),
        (0.025867, 0.014401, 0.014068, 0.017283, 0.023956),
        (0.026084, 0.015807, 0.014762, 0.017245, 0.021088),
        (0.024814, 0.011465, 0.008550, 0.010850, 0.015997),
        (0.024640, 0.010035, 0.005534, 0.006907, 0.010124),
        (0.024638, 0.009976, 0.004925, 0.005121, 0.007505),
        (0.024622, 0.009888, 0.004352, 0.003211, 0.005116),
        (0.024616, 0.009815, 0.004112, 0.002461, 0.003081),
        (0.024616, 0.009814, 0.003937, 0.002064, 0.002367),
        (0.024616, 0.009807, 0.003881, 0.001813, 0.001689),
        (0.024615, 0.009802, 0.003852, 0.001623, 0.001308),
        (0.024615, 0.009803, 0.003851, 0.001553, 0.001093),
        (0.024615, 0.009802, 0.003852, 0.001503, 0.000830),
        (0.024615, 0.009801, 0.003845, 0.001470, 0.000647),
    ),
    (3, 2): (
        (0.095213, 0.096279, 0.110003, 0.163112, 0.202505),
        (0.069075, 0.072595, 0.077403, 0.101639, 0.156190),
        (0.037189, 0.042272, 0.055580, 0.075076, 0.109453),
        (0.019912, 0.020148, 0.028046, 0.044567, 0.077312),
        (0.015445, 0.015796, 0.018872, 0.035310, 0.052812),
        (0.010799, 0.007478, 0.014730, 0.021591, 0.037072),
        (0.011292, 0.007615, 0.010409, 0.013876, 0.026574),
        (0.012527, 0.009047, 0.011426, 0.013697, 0.021402),
        (0.010221, 0.004889, 0.006611, 0.008514, 0.014083),
        (0.009919, 0.002619, 0.003359, 0.004879, 0.008398),
        (0.009851, 0.002347, 0.003053, 0.004197, 0.005689),
        (0.009779, 0.002255, 0.001818, 0.002358, 0.003913),
        (0.009783, 0.002329, 0.001788, 0.001999, 0.003051),
        (0.009766, 0.001968, 0.001211, 0.001580, 0.002321),
        (0.009769, 0.001911, 0.000960, 0.001176, 0.001615),
        (0.009761, 0.001839, 0.000798, 0.000778, 0.001129),
        (0.009757, 0.001793, 0.000472, 0.000455, 0.000766),
        (0.009757, 0.001789, 0.000409, 0.000425, 0.000553),
        (0.009758, 0.001789, 0.000382, 0.000298, 0.000388),
    ),
}
"""Published single-run density errors, one row per ``m``, one column per ``n``."""


def published_grid(key, max_m):
    """Return the published density errors as ``(n, N, eps)`` triples up to ``max_m``."""
    rows = PUBLISHED_DENSITY_GRIDS[key][: max_m + 1]
    return [
        (n, 2 ** (m + 9), eps) for m, row in enumerate(rows) for n, eps in zip(GRID_N, row)
    ]


def coefficient_variances(p, n, nodes=128):
    """Return ``Var P^_i(xi)`` for ``i = 0 .. n`` by Gauss-Legendre quadrature.

    The integrands are polynomial on each half interval, so the rule is exact
    up to rounding as long as ``2 n + max(nu1, nu2) < 2 * nodes``.
    """
    x, w = legendre.gauss_legendre(nodes)
    second = np.zeros(n + 1)
    for left in (-1.0, 0.0):
        points = left + (x + 1) / 2
        values = legendre.eval_normalized_all(n, points)
        second += (values**2 * testfam.density(p, points)) @ w / 2
    return second - testfam.exact_density_coeffs(p, n).coeffs ** 2


def expected_total_error(p, n, N):
    """Return ``sqrt(eps_det ** 2 + E eps_stoch ** 2)`` for the direct route."""
    eps_det, _ = testfam.deterministic_errors(p, n)
    return float(np.sqrt(eps_det**2 + coefficient_variances(p, n).sum() / N))
