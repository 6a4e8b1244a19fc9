"""Exception hierarchy shared by all modules."""


class BetheMpsError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(BetheMpsError, ValueError):
    """An input violates a documented precondition (bad N, U, shape...)."""


class UseFreeProtocol(PreconditionError):
    """The generic Bethe polynomial is invalid at zero interaction."""


class EqualMomentaRejected(BetheMpsError):
    """A root gives ``k1 == k2``; such a state is not a valid eigenstate."""


class UnsupportedConfiguration(PreconditionError):
    """Requested quantity is undefined for this chain (e.g. even N ground state)."""


class DegenerateGroundState(BetheMpsError):
    """The minimum energy is degenerate, so no real ground state is singled out."""


class NumericalError(BetheMpsError, ArithmeticError):
    """A numerical kernel failed to meet its residual contract.

    ``details`` carries whatever diagnostic the raising code found useful
    (worst residual, location of the offending entry, per-class counts...).
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class ConvergenceError(NumericalError):
    """An iterative method ran out of iterations."""


class StructuralError(NumericalError):
    """The solution set does not have the expected structure (e.g. wrong count)."""


class ComplexStateError(NumericalError):
    """Amplitudes cannot be made real by a global phase."""


class CapacityError(BetheMpsError, MemoryError):
    """Requested size exceeds a configured dense/bond-dimension limit."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required
