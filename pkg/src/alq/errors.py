"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """A query argument is outside the supported domain (non-squarefree level, odd weight, ...)."""


class ConsistencyError(ArithmeticError):
    """An exact computation produced a value that must be integral or nonnegative but is not."""


class HypothesisNotSatisfied(ValueError):
    """The hypotheses of a conditional closed formula do not hold for the given input."""
