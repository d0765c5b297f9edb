"""Exception taxonomy shared across the package.

The CLI maps these onto stable exit codes: configuration problems exit 2,
I/O problems exit 3, numerical failures exit 4.
"""


class SketchlsError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(SketchlsError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class SpecError(SketchlsError, ValueError):
    """A configuration object violates its own invariants."""


class InfeasibleResidualError(SpecError):
    """A nonzero optimal residual was requested for a square system."""


class SingularFactorError(SketchlsError, ArithmeticError):
    """A triangular factor is (numerically) singular."""


class NumericalBreakdownError(SketchlsError, ArithmeticError):
    """An iterative method produced a non-finite quantity."""


class CapacityError(SketchlsError, MemoryError):
    """A debug/test-only path was asked to materialize beyond its size guard."""


class UndefinedMetricError(SketchlsError, ZeroDivisionError):
    """A relative metric was requested with a zero denominator."""
