# coding=utf-8
"""Value types shared by the legproj modules."""
from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Optional

import numpy as np
from attrs import field
from attrs import frozen

from legproj import constants
from legproj import exceptions
from legproj.enums import Algorithm
from legproj.enums import BoundFlavor
from legproj.enums import CoeffKind
from legproj.enums import Mode
from legproj.enums import OutputFormat
from legproj.enums import Target


def _readonly_array(value):
    array = np.array(value, dtype=np.float64)
    array.setflags(write=False)
    return array


def _positive_int(instance, attribute, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise exceptions.FamilyParameterError(
            "{} must be a positive integer, got {!r}.".format(attribute.name, value)
        )


def _finite_non_negative(instance, attribute, value):
    if not math.isfinite(value) or value < 0:
        raise ValueError(
            "{} must be finite and non-negative, got {!r}.".format(attribute.name, value)
        )


@frozen(eq=False)
class CoeffVector:
    """Expansion coefficients ``c_0 .. c_n`` in the normalized Legendre basis."""

    kind: CoeffKind
    coeffs: np.ndarray = field(converter=_readonly_array)

    @coeffs.validator
    def _check_coeffs(self, attribute, value):
        if value.ndim != 1 or value.size == 0:
            raise exceptions.CoefficientLengthError(
                "Coefficients must be a non-empty sequence, got shape {}.".format(value.shape)
            )

    @property
    def n(self):
        """Return the largest degree carried by the vector."""
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def truncated(self, n):
        """Return a vector carrying the degrees ``0 .. n`` only."""
        if n > self.n:
            raise exceptions.CoefficientLengthError(
                "Cannot truncate {} coefficients to degree {}.".format(len(self), n)
            )
        return CoeffVector(self.kind, self.coeffs[: n + 1])

    def parseval_partial_sums(self):
        """Return the running sums of squared coefficients."""
        return np.cumsum(self.coeffs**2)


@frozen
class TestFamilyParams:
    """Exponents of the two-parameter test density and its derived constants.

    The density is ``gamma * (1 - (-x) ** nu1)`` on ``[-1, 0)`` and
    ``gamma * (1 - x ** nu2)`` on ``[0, 1]``.
    """

    __test__ = False

    nu1: int = field(validator=_positive_int)
    nu2: int = field(validator=_positive_int)

    def __attrs_post_init__(self):
        if self.nu1 == self.nu2:
            raise exceptions.FamilyParameterError(
                "The exponents must differ, got nu1 = nu2 = {}.".format(self.nu1)
            )

    @property
    def gamma_exact(self):
        return 1 / (Fraction(self.nu1, self.nu1 + 1) + Fraction(self.nu2, self.nu2 + 1))

    @property
    def f_at_zero_exact(self):
        return self.gamma_exact * Fraction(self.nu1, self.nu1 + 1)

    @property
    def gamma(self):
        """Return the normalizing constant."""
        return float(self.gamma_exact)

    @property
    def f_at_zero(self):
        """Return the value of the distribution function at zero."""
        return float(self.f_at_zero_exact)

    @property
    def smoothness(self):
        """Return the supremum ``min(nu1, nu2) + 1/2`` of the Sobolev smoothness."""
        return min(self.nu1, self.nu2) + 0.5

    @property
    def continuity_order(self):
        """Return the number of continuous derivatives, ``min(nu1, nu2) - 1``."""
        return min(self.nu1, self.nu2) - 1

    @property
    def key(self):
        return (self.nu1, self.nu2)


@frozen
class QTable:
    """Integrals of ``x ** nu * P_i(x)`` over ``[-1, 0]`` and ``[0, 1]``.

    ``minus[nu][i]`` and ``plus[nu][i]`` are exact rationals for
    ``0 <= nu <= numax`` and ``0 <= i <= imax``.
    """

    numax: int
    imax: int
    minus: tuple
    plus: tuple


@frozen(eq=False)
class SampleBatch:
    """Realizations of the test family random variable with their provenance."""

    values: np.ndarray = field(converter=_readonly_array)
    params: Optional[TestFamilyParams] = None
    seed: Optional[int] = None
    stream_id: Optional[int] = None

    @property
    def N(self):
        return self.values.size

    def __len__(self):
        return self.values.size


@frozen(eq=False)
class MomentVector:
    """Sample initial moments ``M_0 .. M_kmax``; ``M_0`` is one."""

    moments: np.ndarray = field(converter=_readonly_array)

    @moments.validator
    def _check_moments(self, attribute, value):
        if value.ndim != 1 or value.size == 0:
            raise ValueError(
                "Moments must be a non-empty sequence, got shape {}.".format(value.shape)
            )
        if abs(value[0] - 1) > constants.MOMENT_TOLERANCE:
            raise ValueError("M_0 must be one, got {!r}.".format(float(value[0])))
        if not np.all(np.abs(value) <= 1 + constants.MOMENT_TOLERANCE):
            raise ValueError(
                "Moments of a sample on [-1, 1] are at most one in magnitude, got {!r}.".format(
                    float(np.max(np.abs(value)))
                )
            )

    @property
    def kmax(self):
        return self.moments.size - 1

    def __len__(self):
        return self.moments.size


@frozen
class BoundConstants:
    """Constants of the error bound ``sqrt(c1 n / N + c2 / n ** (2 s))``."""

    c1: float = field(converter=float, validator=_finite_non_negative)
    c2: float = field(converter=float, validator=_finite_non_negative)
    s: float = field(converter=float)
    flavor: BoundFlavor = BoundFlavor.POWER_LAW

    @s.validator
    def _check_s(self, attribute, value):
        if not math.isfinite(value) or value <= 0:
            raise ValueError("Smoothness must be positive, got {!r}.".format(value))


@frozen
class OptimizationPlan:
    gamma_target: float
    n_opt: int
    N_opt: int
    relation_exponent: float
    target: Target = Target.DENSITY
    n_real: float = math.nan
    N_real: float = math.nan


@frozen
class ErrorReport:
    """Errors of one estimate in one grid cell.

    ``eps_total ** 2 == eps_det ** 2 + eps_stoch ** 2`` by Parseval's identity.
    """

    nu1: int
    nu2: int
    n: int
    m: Optional[int]
    N: int
    target: Target
    eps_det: float
    eps_stoch: float
    eps_total: float
    seed: Optional[int] = None
    replicate: int = 0

    @classmethod
    def from_components(cls, eps_det, eps_stoch, **kwargs):
        """Build a report, combining the two error components."""
        return cls(
            eps_det=eps_det, eps_stoch=eps_stoch, eps_total=math.hypot(eps_det, eps_stoch), **kwargs
        )

    def as_row(self):
        """Return the report as a flat dict keyed by the table columns."""
        row = {name: getattr(self, name) for name in constants.TABLE_FIELDS}
        row["target"] = self.target.value
        return row


def _non_empty(instance, attribute, value):
    if instance.mode in (Mode.TABLE, Mode.FIT, Mode.EXACT, Mode.ESTIMATE) and not value:
        raise ValueError(
            "{} must not be empty for the {} mode.".format(attribute.name, instance.mode.value)
        )


@frozen
class ExperimentConfig:
    """Everything needed to rerun one command of the experiment harness."""

    family: TestFamilyParams
    n_list: tuple = field(converter=tuple, validator=_non_empty)
    m_list: tuple = field(converter=tuple, validator=_non_empty)
    seed: int = constants.DEFAULT_SEED
    replicates: int = field(default=1)
    algorithm: Algorithm = Algorithm.DIRECT
    output: OutputFormat = OutputFormat.CSV
    mode: Mode = Mode.TABLE
    max_m: int = constants.MAX_M
    workers: int = 1
    block_size: int = constants.DEFAULT_BLOCK_SIZE

    @replicates.validator
    def _check_replicates(self, attribute, value):
        if value < 1:
            raise ValueError("replicates must be at least 1, got {!r}.".format(value))

    @property
    def sample_sizes(self):
        return tuple(2 ** (m + constants.SAMPLE_SIZE_OFFSET) for m in self.m_list)
