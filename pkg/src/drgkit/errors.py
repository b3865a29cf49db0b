"""Exception hierarchy shared by all modules."""


class DRGKitError(Exception):
    """Base class for every error raised by drgkit."""


# graph-core ---------------------------------------------------------------

class Graph6Error(DRGKitError, ValueError):
    """Input is not a valid graph6 string."""


class MalformedHeader(Graph6Error):
    pass


class InvalidCharacter(Graph6Error):
    pass


class TruncatedBitVector(Graph6Error):
    pass


class TrailingData(Graph6Error):
    """Extra bytes or nonzero padding after the adjacency bit vector."""


class EdgeListError(DRGKitError, ValueError):
    pass


class ParseError(EdgeListError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SelfLoop(EdgeListError):
    pass


class VertexOutOfRange(EdgeListError):
    pass


class Disconnected(DRGKitError):
    def __init__(self, source: int, unreachable: int):
        super().__init__(f"vertex {unreachable} is unreachable from {source}")
        self.source = source
        self.unreachable = unreachable


class EmptySubset(DRGKitError, ValueError):
    pass


class NotRegular(DRGKitError):
    pass


# spectral -----------------------------------------------------------------

class EigenFailure(DRGKitError):
    pass


class NonIntegerMultiplicity(DRGKitError):
    pass


class DenseLimitExceeded(DRGKitError):
    pass


class OracleMismatch(DRGKitError):
    pass


class DegenerateDenominator(DRGKitError):
    pass


# classical ----------------------------------------------------------------

class NonPositiveEntry(DRGKitError, ValueError):
    pass


class NonIntegerEntry(DRGKitError, ValueError):
    pass


class DegenerateDual(DRGKitError):
    pass


# closure / certification --------------------------------------------------

class HypothesisViolated(DRGKitError):
    pass


class CertificationFailed(DRGKitError):
    """A construction that theory guarantees produced a bad certificate."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


# families -----------------------------------------------------------------

class UnsupportedParameters(DRGKitError, ValueError):
    pass
