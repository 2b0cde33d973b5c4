# coding=utf-8
"""Values usable by multiple legproj modules."""
import math

NORMALIZED_P0 = math.sqrt(0.5)
"""Value of the constant normalized Legendre polynomial of degree zero."""

EXPLICIT_EXACT_MAX_DEGREE = 30
"""Largest degree whose explicit coefficients use exact integer binomials."""

RADICAND_TOLERANCE = 1e-14
"""Negative squared errors down to minus this value are clamped to zero."""

ROOT_RESIDUAL_TOLERANCE = 1e-13
"""Residual at which the bracketed Newton iteration stops."""

ROOT_WIDTH_TOLERANCE = 1e-14
"""Bracket width at which the bracketed Newton iteration stops."""

ROOT_MAX_ITERATIONS = 200
"""Iteration budget of the bracketed Newton iteration."""

SAMPLE_SIZE_OFFSET = 9
"""Sample sizes of the experiment grid are ``2 ** (m + SAMPLE_SIZE_OFFSET)``."""

MAX_M = 18
"""Largest sample size exponent of the experiment grid (``N = 2 ** 27``)."""

DEFAULT_N_LIST = (4, 8, 16, 32, 64)
"""Expansion lengths of the experiment grid, ``n = 2 ** (k + 2)``."""

DEFAULT_M_LIST = tuple(range(0, 15))
"""Sample size exponents swept by default (the ``m <= 14`` desk-scale grid)."""

DEFAULT_SEED = 20250101
"""Seed used when neither the command line nor the config provides one."""

DEFAULT_BLOCK_SIZE = 2**16
"""Number of uniforms drawn from one counter-based sub-stream."""

CLOSED_FORM_FAMILIES = ((1, 2), (3, 2))
"""Families with closed-form inverse distribution functions."""

PUBLISHED_BOUND_CONSTANTS = {
    (1, 2): (0.885, 0.276),
    (3, 2): (0.890, 0.545),
}
"""Published density bound constants ``(c1, c2)`` for the two reference families."""

EXPERIMENT_DEFAULTS = {
    "seed": DEFAULT_SEED,
    "n_list": list(DEFAULT_N_LIST),
    "m_list": list(DEFAULT_M_LIST),
    "replicates": 1,
    "algorithm": 2,
    "format": "csv",
    "max_m": MAX_M,
    "workers": 1,
    "block_size": DEFAULT_BLOCK_SIZE,
}
"""Experiment settings used when the config file does not override them."""

TABLE_FIELDS = (
    "nu1",
    "nu2",
    "n",
    "m",
    "N",
    "target",
    "eps_det",
    "eps_stoch",
    "eps_total",
    "seed",
    "replicate",
)
"""Columns of the ``table`` command CSV output."""

EXACT_FIELDS = ("nu1", "nu2", "n", "target", "eps_det", "display")
"""Columns of the ``exact`` command CSV output."""

FIT_FIELDS = ("k", "m", "n", "N", "computational", "theoretical")
"""Columns of the long-format surfaces emitted by the ``fit`` command."""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

ACCUMULATION_CHUNK_SIZE = 2**13
"""Samples reduced together before compensated accumulation."""

INVERSION_TAIL = 1e-8
"""Probabilities within this distance of zero or one are inverted from the
expansion of the distribution function around the nearest endpoint."""

TAIL_NEWTON_ITERATIONS = 6
"""Newton steps taken by the endpoint inversion."""

SAMPLE_CHUNK_SIZE = 2**20
"""Realizations drawn at a time when an estimate streams its sample; a
multiple of ``ACCUMULATION_CHUNK_SIZE``."""

MOMENT_TOLERANCE = 1e-12
"""Rounding allowed on ``M_0 = 1`` and ``|M_k| <= 1`` of sample moments."""
