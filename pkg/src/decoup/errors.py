"""Exception types shared across the package."""


class DecoupError(Exception):
    """Base class for library errors."""


class LinearPhaseError(DecoupError):
    """Raised when an operation requires a phase with nonzero curvature."""


class RootIsolationError(DecoupError):
    """Root isolation could not certify a result at the requested width."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class PreconditionViolated(DecoupError):
    """An operation's documented precondition does not hold for the input."""


class NotAdmissibleCell(DecoupError):
    """Raised when a cell fails the tangency property required for a cap."""


class NotSubAdmissible(DecoupError):
    """Partition fails the sub-admissibility hypothesis of the estimator."""


class IncompatibleShear(DecoupError):
    """Shear parameters do not map the sampling lattice to itself."""


class NyquistViolation(DecoupError):
    """Lattice steps too coarse for the field's frequency content."""


class QuadratureBudgetExceeded(DecoupError):
    """Adaptive quadrature failed to reach the requested error budget."""


class BudgetExceeded(DecoupError):
    """Enumeration size exceeds the supported brute-force budget."""


class InternalInvariantError(DecoupError):
    """A construction violated one of its own asserted invariants."""
