"""Exception hierarchy shared by every module."""


class OpFilterError(Exception):
    """Base class for all package errors."""


class ShapeError(OpFilterError, ValueError):
    """Operand shapes are incompatible."""


class DomainViolation(OpFilterError, ValueError):
    """A spectrum falls outside the domain of the requested function."""


class EmptyInput(OpFilterError, ValueError):
    pass


class FlagViolation(OpFilterError, ValueError):
    """A map lacks a metadata flag the operation requires."""


class NumericalFailure(OpFilterError, ArithmeticError):
    pass


class NonConvergence(NumericalFailure):
    """An iteration hit its cap; ``residual`` holds the last value seen."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NotCP(OpFilterError, ValueError):
    """A Choi matrix has a significantly negative eigenvalue."""


class SingularNormalization(NumericalFailure):
    pass


class ConfigError(OpFilterError, ValueError):
    pass
