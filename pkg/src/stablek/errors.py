"""Exception types shared across the package."""


class StableKError(Exception):
    """Base class for all errors raised by this package."""


class NonAssociative(StableKError, ValueError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"multiplication is not associative on basis triple ({i}, {j}, {k})")
        self.witness = (i, j, k)


class BadUnit(StableKError, ValueError):
    def __init__(self, i: int):
        super().__init__(f"unit vector is not a two-sided identity on basis element {i}")
        self.witness = i


class NotCommutative(StableKError, ValueError):
    pass


class NotSurjective(StableKError, ValueError):
    pass


class AlgebraMismatch(StableKError, ValueError):
    pass


class InvalidModule(StableKError, ValueError):
    pass


class InvalidHom(StableKError, ValueError):
    pass


class NotExact(StableKError, ValueError):
    pass


class CapExceeded(StableKError):
    """An enumeration would exceed its configured cap."""


class BudgetExceeded(StableKError):
    pass


class UnsupportedSemisimpleType(StableKError):
    """The semisimple quotient is not split over the prime field."""


class NotQuasiFrobenius(StableKError):
    pass


class ClosureEscape(StableKError):
    """A cokernel left the module universe it was supposed to stay in."""
