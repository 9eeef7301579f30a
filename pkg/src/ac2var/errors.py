"""Exception types raised across the package."""


class SemigroupError(Exception):
    """Base class for every error this package raises on bad input."""


class InternalInvariantViolation(AssertionError):
    """A consistency check that can only fail because of a bug."""


class ParseError(SemigroupError):
    pass


class NonAssociative(SemigroupError):
    def __init__(self, i, j, k):
        self.triple = (i, j, k)
        super().__init__(f"(x{i}*x{j})*x{k} != x{i}*(x{j}*x{k}) for triple ({i}, {j}, {k})")


class IndexOutOfRange(SemigroupError):
    def __init__(self, row, col, value=None):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"table entry at ({row}, {col}) is out of range: {value!r}")


class UnknownName(SemigroupError):
    pass


class EmptySeed(SemigroupError):
    pass


class SizeBoundExceeded(SemigroupError):
    pass


class WordSyntaxError(SemigroupError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnboundVariable(SemigroupError):
    def __init__(self, var):
        self.var = var
        super().__init__(f"variable {var!r} has no assigned value")


class PatternMismatch(SemigroupError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"rule pattern does not match at position {position}")


class PositionOutOfRange(SemigroupError):
    pass


class NotConnected(SemigroupError):
    pass


class SameVariable(SemigroupError):
    pass


class VariableAbsent(SemigroupError):
    pass


class NotAWitness(SemigroupError):
    pass


class InvalidSpec(SemigroupError):
    pass


class NotCompletelyZeroSimple(SemigroupError):
    pass
