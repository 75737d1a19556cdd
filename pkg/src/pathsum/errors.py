"""Exception hierarchy shared by all path-sum modules."""


class PathSumError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(PathSumError):
    """A computation failed for numerical reasons (CLI exit code 2)."""


class UsageError(PathSumError):
    """Bad input supplied by the caller (CLI exit code 1)."""


class FloatModeUnsupported(UsageError):
    pass


class NonConvergence(NumericalError):
    pass


class DimensionMismatch(UsageError):
    pass


class Singular(NumericalError):
    pass


class SingularOverField(Singular):
    pass


class SingularDressing(Singular):
    """A dressed-vertex bracket could not be inverted."""


class SingularChain(Singular):
    pass


class InvalidPermutation(UsageError):
    pass


class BadGroups(UsageError):
    pass


class BadDims(UsageError):
    pass


class VertexRemoved(UsageError):
    pass


class NilpotentUnsupported(NumericalError):
    pass


class NotStrictlyProper(UsageError):
    pass


class NotATree(UsageError):
    pass


class NotAChain(UsageError):
    """The partition graph is not a linear chain."""


class ParseError(UsageError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class NonSquare(UsageError):
    pass
