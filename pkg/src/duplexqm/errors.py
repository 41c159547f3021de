"""Exception types shared across the package."""


class DuplexQMError(Exception):
    pass


class SignatureMismatch(DuplexQMError, ValueError):
    """Operands live in different algebras."""


class NullNorm(DuplexQMError, ArithmeticError):
    """Element on the null cone (zero norm) has no inverse."""


class OutOfCone(DuplexQMError, ValueError):
    """Polar form is undefined for this element or grid point."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NonInvertibleUnit(DuplexQMError, ValueError):
    pass


class SolverBreakdown(DuplexQMError, RuntimeError):
    pass


class ConvergenceError(DuplexQMError, RuntimeError):
    pass
