"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a function."""


class ConvergenceError(ArithmeticError):
    """A numerical routine exhausted its budget before meeting tolerance.

    The best available estimate is kept on ``result`` so callers can still
    inspect it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
