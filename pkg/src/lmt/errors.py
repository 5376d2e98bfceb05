"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LmtError(Exception):
    """Base class for all errors raised by the package."""


# signatures and terms
class DuplicateColour(LmtError):
    pass


class DuplicateGenerator(LmtError):
    pass


class UnknownColourInSort(LmtError):
    pass


class UnknownGenerator(LmtError):
    pass


class SortMismatch(LmtError):
    pass


# theories and rewriting
class NotParallel(LmtError):
    pass


class MissingStructure(LmtError):
    pass


# layered theories
class IncoherentComposite(LmtError):
    pass


class SortViolationInFunctorData(LmtError):
    pass


class WrongLayer(LmtError):
    pass


class NoMatch(LmtError):
    pass


class NoBox(LmtError):
    pass


class LayerMismatch(LmtError):
    pass


# zx
class DimensionOverflow(LmtError):
    pass


class DimensionMismatch(LmtError):
    pass


# mbqc
class UnknownVertex(LmtError):
    pass


class VertexNamespaceExhausted(LmtError):
    pass


class NotAnEdge(LmtError):
    pass


class NotRemovable(LmtError):
    pass


class NameClash(LmtError):
    pass


class LengthMismatch(LmtError):
    pass


class InvalidGraph(LmtError):
    pass


# probability
class DomainMismatch(LmtError):
    pass


class NotMarginallyFullSupport(LmtError):
    pass


class NotFullSupport(LmtError):
    pass


class InvalidChannel(LmtError):
    pass


# text formats
class ParseError(LmtError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
