# coding=utf-8
"""Custom exceptions defined by legproj."""


class ConfigFileNotFoundError(UserWarning):
    """We cannot find the requested legproj configuration file.

    See :mod:`legproj.config` for more information on how configuration files
    are handled.
    """


class OutOfDomainWarning(UserWarning):
    """A point outside of ``[-1, 1]`` was handed to a polynomial evaluation.

    The polynomials are entire functions, so the value is still computed, but
    the estimated functions are supported on ``[-1, 1]`` only.
    """


class SampleSizeWarning(UserWarning):
    """A sample size exponent beyond the usual grid has been requested."""


class NumericalFailure(Exception):
    """Base class for failures of the numerical machinery itself.

    These errors indicate a bug or an unreachable state rather than a bad
    input. The command line maps them to exit code 2.
    """


class NegativeRadicandError(NumericalFailure):
    """A squared error came out negative beyond the rounding allowance.

    The radicand, the allowance and the context are stored in ``args``.
    """

    def __str__(self):
        """Provide a human-friendly string representation of this exception."""
        return ("Radicand {!r} is below the allowed -{!r} while computing {}.").format(*self.args)


class RootFinderError(NumericalFailure):
    """The bracketed Newton iteration did not converge.

    Both branch equations of the inverse function method are strictly
    monotone on their bracket, so this should be unreachable.
    """


class FamilyParameterError(ValueError):
    """The two-parameter test family received invalid exponents."""


class CoefficientLengthError(ValueError):
    """A coefficient vector is too short for the requested operation."""


class ExplicitTermError(ValueError):
    """A term index of the explicit Legendre formula is out of range."""


class EmptySampleError(ValueError):
    """An estimator was handed an empty sample."""


class DegenerateGridError(ValueError):
    """A grid of errors does not carry enough distinct ``n`` or ``N`` values."""


class BoundDomainError(ValueError):
    """An error bound was requested outside of the domain of its formula."""


class SampleFileError(OSError):
    """A sample file could not be written or read.

    The offending path is the first item of ``args``.
    """

    def __str__(self):
        """Provide a human-friendly string representation of this exception."""
        return "Sample file {}: {}".format(*self.args)
