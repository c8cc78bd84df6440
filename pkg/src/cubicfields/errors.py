class InternalConsistencyError(RuntimeError):
    """An arithmetic invariant that cannot fail did fail: a bug, not bad input."""


class UnderdeterminedError(ValueError):
    """Too few test primes to pin down a character's exponent vector."""


class IntegralityError(RuntimeError):
    """Class-number formula produced a value too far from an integer."""

    def __init__(self, message, raw):
        super().__init__(message)
        self.raw = raw
