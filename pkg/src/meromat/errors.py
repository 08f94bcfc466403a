"""Exception hierarchy.

Two families matter to callers: `InputError` (bad arguments, malformed
files) and `NumericalError` (the computation ran but a tolerance or
invariant check failed). The command line maps them to exit codes 2 and 3.
"""


class MeromatError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MeromatError, ValueError):
    """An argument or input file is invalid."""


class NumericalError(MeromatError, ArithmeticError):
    """A numerical decision or invariant check failed."""


class UnsupportedRequest(MeromatError):
    """The request is well formed but not supported."""


# spectral core

class NonSquare(InputError):
    pass


class NonFinite(InputError):
    pass


class ClusterAmbiguity(NumericalError):
    """Eigenvalue clusters overlap within the clustering tolerance.

    Attributes
    ----------
    groupings : list of list of list of complex
        The candidate groupings of raw eigenvalues, separate first.
    """

    def __init__(self, msg, groupings=()):
        super().__init__(msg)
        self.groupings = list(groupings)


class ChainConstructionFailure(NumericalError):
    pass


class InvariantViolation(NumericalError):
    """A decomposition invariant failed its residual check.

    Attributes
    ----------
    invariant : str
    residual : float
    """

    def __init__(self, invariant, residual, limit):
        super().__init__(
            f"invariant {invariant!r} violated: residual {residual:.3e} "
            f"exceeds {limit:.3e}"
        )
        self.invariant = invariant
        self.residual = residual
        self.limit = limit


class IndexNotOne(InputError):
    pass


class SpectrumHit(InputError):
    pass


class ContourContainsOtherEigenvalue(InputError):
    pass


# functional calculus

class MissingEigenvalueData(InputError):
    pass


class InsufficientLaurentDepth(InputError):
    pass


class FunctionSingularAtEigenvalue(InputError):
    pass


class ZeroC(InputError):
    pass


class NotStochastic(InputError):
    pass


class NotRateMatrix(InputError):
    pass


class StationaryEigenvalueMissing(InputError):
    pass


# stochastic dynamics

class NonUniqueStationary(InputError):
    pass


class InvalidRate(InputError):
    pass


class NegativeRate(InputError):
    pass


class QuadratureFailure(NumericalError):
    pass


class NotDiagonalizable(InputError):
    pass


# spectral densities

class GridHitsSpectralLine(InputError):
    pass


class DefectiveUnitCircleMode(UnsupportedRequest):
    pass


class MissingSampler(InputError):
    pass


class EmptySeries(InputError):
    pass


class InsideUnitCircle(InputError):
    pass


class SeriesTooShort(InputError):
    pass
