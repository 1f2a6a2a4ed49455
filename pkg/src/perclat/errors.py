"""Exception hierarchy shared by every perclat module."""

from __future__ import annotations


class PerclatError(Exception):
    """Base class for all library errors."""


class InputError(PerclatError, ValueError):
    """Malformed or invalid user input (CLI exit code 2)."""


class GeometryError(InputError):
    pass


class SelfIntersectingPolygon(GeometryError):
    pass


class Degenerate(InputError):
    """Lattice input that is not a simple straight-line graph."""


class DuplicateEdge(Degenerate):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"duplicate edge {edge!r}")


class ZeroLengthEdge(Degenerate):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"zero-length edge {edge!r}")


class CoincidentDirections(Degenerate):
    def __init__(self, vertex, neighbors):
        self.vertex = vertex
        self.neighbors = neighbors
        super().__init__(
            f"edges from {vertex!r} to {neighbors[0]!r} and {neighbors[1]!r} leave in the same direction"
        )


class NotConnected(InputError):
    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"lattice is not connected (vertex {vertex!r} unreachable)")


class NotPlanar(InputError):
    def __init__(self, edge_a, edge_b, message=None):
        self.edges = (edge_a, edge_b)
        super().__init__(message or f"edges {edge_a!r} and {edge_b!r} intersect")


class BridgeEdge(InputError):
    def __init__(self, edge, message=None):
        self.edge = edge
        super().__init__(message or f"edge {edge!r} lies on no cycle")


class NotCellular(InputError):
    """A bounded face is not bounded by a simple cycle."""

    def __init__(self, walk):
        self.walk = walk
        super().__init__(f"bounded face {walk!r} is not a simple cycle")


class UnknownEdge(PerclatError, KeyError):
    pass


class UnknownCell(PerclatError, KeyError):
    pass


class TooFewSharedVertices(PerclatError, ValueError):
    pass


class OriginVacant(PerclatError, ValueError):
    pass


class DualError(PerclatError):
    pass


class DualNotPlanar(DualError):
    pass


class DualNotConnected(DualError):
    pass


class DualAcyclic(DualError):
    pass


class HypothesisViolated(PerclatError, ValueError):
    pass


class MissingVacantNeighbor(PerclatError, ValueError):
    def __init__(self, edge, message):
        self.edge = edge
        super().__init__(message)


class CoverError(InputError):
    pass


class VertexOnSide(CoverError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"lattice vertex {vertex!r} lies on a side of the rectangle")


class NotNicelyCovered(CoverError):
    def __init__(self, clause, witness):
        self.clause = clause
        self.witness = witness
        super().__init__(f"rectangle not nicely covered ({clause}): {witness!r}")


class NotNicelyPadded(CoverError):
    def __init__(self, pair, lines):
        self.pair = pair
        self.lines = lines
        super().__init__(f"rectangle not nicely padded: cells on the {lines} lines are star adjacent: {pair!r}")


class DualityViolation(PerclatError):
    """Both or neither event of a complementary pair occurred."""

    def __init__(self, pair, report):
        self.pair = pair
        self.report = report
        super().__init__(f"duality violated for {pair}")
