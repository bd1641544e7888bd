"""Exception types shared across the package.

Everything raised on purpose derives from GenusVarError so callers (and the
CLI) can distinguish input problems from resource exhaustion.
"""


class GenusVarError(Exception):
    """Base class for all package errors."""


class InputError(GenusVarError):
    """Bad user input: malformed matrix, unparsable file, bad parameter."""


class NotSymmetric(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class NotIntegral(InputError):
    pass


class ParseError(InputError):
    pass


class InconsistentGenus(InputError):
    """Classes in one genus file disagree on det, parity or level."""


class EmptyGenus(InputError):
    pass


class TargetNotPositive(InputError):
    pass


class UnsupportedN(InputError):
    """Representation target outside the supported n = 1 (scalar) case."""


class DimensionTooSmall(InputError):
    """Operation needs a higher rank than the supplied form has."""


class BudgetExceeded(GenusVarError):
    """Enumeration/backtracking node budget ran out (all-or-nothing)."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class NotStabilized(GenusVarError):
    """A p-adic density did not stabilize before the exponent cap.

    Carries the last two computed densities so callers can inspect how far
    apart the sequence still was at the cap.
    """

    def __init__(self, message: str, k_max: int = 0, last_values=()):
        super().__init__(message)
        self.k_max = k_max
        self.last_values = tuple(last_values)


class NoPoints(GenusVarError):
    """The requested sphere carries no integral points at all."""


class DegenerateScale(GenusVarError):
    """Kernel radius so large the pair kernel stops resolving anything."""


class QuadratureFailure(GenusVarError):
    """A quadrature did not reach its requested accuracy."""


class AllZeroSeries(GenusVarError):
    """Hecke checks need at least one nonzero coefficient."""


class EmptySolutionSet(GenusVarError):
    """No lattice points to work with where some were required."""


class RootSplittingError(GenusVarError):
    """Internal consistency failure in the root-span splitting."""
