# coding=utf-8
"""Utility functions."""
import hashlib
import math
import os

from legproj import constants
from legproj import exceptions
from legproj.config import get_config


def run_sweeps():
    """Check for run sweeps environment variable."""
    result = True
    run_sweeps = os.environ.get("RUN_SWEEPS", "true")
    if run_sweeps.lower() == "false":
        result = False
    return result


def get_experiment_settings():
    """Return the experiment settings, built-in defaults shadowed by config.

    The ``legproj`` section of the configuration file may override any key
    of :data:`legproj.constants.EXPERIMENT_DEFAULTS`. Unknown keys are kept,
    so later versions can read them.
    """
    settings = dict(constants.EXPERIMENT_DEFAULTS)
    cfg = get_config().get("legproj", {}) or {}
    settings.update({str(key).lower(): value for key, value in dict(cfg).items()})
    return settings


def get_bound_constants(nu1, nu2):
    """Return the ``(c1, c2)`` density bound constants known for a family.

    The ``constants`` section of the configuration file is consulted first,
    with keys such as ``"1,2"``. The published constants of the two reference
    families are used otherwise. ``None`` is returned for other families.
    """
    key = "{},{}".format(nu1, nu2)
    cfg = get_config().get("constants", {}) or {}
    for cfg_key, value in dict(cfg).items():
        if str(cfg_key).replace(" ", "") == key:
            return float(value[0]), float(value[1])
    return constants.PUBLISHED_BOUND_CONSTANTS.get((nu1, nu2))


def sample_size(m):
    """Return the grid sample size ``2 ** (m + 9)`` for exponent ``m``."""
    if m < 0:
        raise ValueError("Sample size exponent must be non-negative, got {!r}.".format(m))
    return 2 ** (m + constants.SAMPLE_SIZE_OFFSET)


def derive_cell_seed(seed, nu1, nu2, n, m, replicate):
    """Derive the 64-bit seed of one grid cell.

    The derived seed only depends on the arguments, so any cell of a grid can
    be recomputed on its own.
    """
    payload = ",".join(str(int(item)) for item in (seed, nu1, nu2, n, m, replicate))
    digest = hashlib.blake2b(payload.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def checked_sqrt(radicand, context):
    """Return the square root of ``radicand``, clamping rounding noise.

    :param radicand: A real number (or a :class:`fractions.Fraction`).
    :param context: A string naming the quantity, used in the error message.
    :raises legproj.exceptions.NegativeRadicandError: if ``radicand`` is
        below ``-RADICAND_TOLERANCE``.
    """
    value = float(radicand)
    if value < 0:
        if value < -constants.RADICAND_TOLERANCE:
            raise exceptions.NegativeRadicandError(
                value, constants.RADICAND_TOLERANCE, context
            )
        return 0.0
    return math.sqrt(value)


def format_table_value(value):
    """Format an error the way the published tables print it.

    Six decimals, switching to two-digit scientific notation for values
    that would otherwise print as ``0.000000`` or lose their leading digit.
    """
    if value != 0 and abs(value) < 1e-5:
        mantissa, exponent = "{:.2e}".format(value).split("e")
        return "{}e{}".format(mantissa, int(exponent))
    return "{:.6f}".format(value)
