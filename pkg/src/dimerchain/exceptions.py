class NumericalError(RuntimeError):
    """Base class for failures that map to CLI exit code 2."""


class ConvergenceError(NumericalError):
    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class DegenerateGroundStateError(NumericalError):
    """Concurrence is only defined here on a unique ground state."""


class SymmetryBreakingError(NumericalError):
    """Bonds of the same coupling class disagree beyond tolerance."""

    def __init__(self, message, spread):
        super().__init__(message)
        self.spread = spread
