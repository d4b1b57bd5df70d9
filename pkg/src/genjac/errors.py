"""Exception types raised across the package."""


class GenJacError(Exception):
    """Base class for all package errors."""


class RangeError(GenJacError, ValueError):
    """An exponent is outside its admissible range."""


class OrderError(GenJacError, ValueError):
    """Singular points collide or leave the open interval (-1, 1)."""


class PositivityError(GenJacError, ValueError):
    """The analytic factor h is not strictly positive on [-1, 1]."""


class DomainError(GenJacError, ValueError):
    """A function was evaluated outside its domain (endpoint, branch cut, ...)."""


class ConvergenceError(GenJacError, ArithmeticError):
    """An iterative method did not converge within its step budget."""


class PrecisionError(GenJacError, ArithmeticError):
    """A discrete norm vanished; the quadrature is too coarse for the degree asked."""


class AccuracyError(GenJacError, ArithmeticError):
    """A special-function evaluation could not reach its accuracy target."""
