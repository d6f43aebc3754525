"""Exception hierarchy shared by every module."""


class LambertError(Exception):
    """Base class for all errors raised by lambertfact."""


class DomainError(LambertError, ValueError):
    """An argument lies outside the domain of the requested function."""


class DivergenceError(DomainError):
    """A series was requested at a parameter where it does not converge."""


class NonInvertibleError(LambertError, ZeroDivisionError):
    """A series or sequence that must be inverted has a zero where it cannot."""


class SingularMatrixError(NonInvertibleError):
    """A lower-triangular matrix has a zero on its diagonal."""

    def __init__(self, row, message=None):
        self.row = row
        super().__init__(message or f"zero diagonal entry in row {row}")


class IdentityViolation(LambertError):
    """An identity that should hold exactly was found to fail."""
