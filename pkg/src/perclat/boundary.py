"""Occupied star/plus components, their outermost boundaries and the Euler circuit."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import OriginVacant, PerclatError
from .generators import SiteConfig
from .lattice import (
    Adjacency,
    CellDecomposition,
    CellId,
    Cycle,
    Edge,
    canonical_cycle,
    cycle_edges,
    outer_walk,
    split_closed_walk,
)


@dataclass(frozen=True)
class CellComponent:
    mode: Adjacency
    origin: CellId
    cells: frozenset
    edges: frozenset = field(repr=False)
    vertices: frozenset = field(repr=False)


@dataclass(frozen=True)
class OutermostBoundary:
    cycles: tuple[Cycle, ...]
    euler_circuit: tuple = ()

    @property
    def edges(self) -> set[Edge]:
        return {e for c in self.cycles for e in cycle_edges(c)}


def component(
    dec: CellDecomposition, cfg: SiteConfig, mode: Adjacency, origin: CellId | None = None
) -> CellComponent:
    """Occupied cells reachable from the origin through ``mode``-adjacent occupied cells."""
    mode = Adjacency(mode)
    origin = cfg.origin_cell if origin is None else origin
    if origin is None:
        raise OriginVacant("no origin cell given")
    dec.cell(origin)
    if origin not in cfg.occupied:
        raise OriginVacant(f"origin cell {origin!r} is vacant")
    seen = {origin}
    queue = deque([origin])
    while queue:
        c = queue.popleft()
        for n in dec.neighbors(c, mode):
            if n not in seen and n in cfg.occupied:
                seen.add(n)
                queue.append(n)
    edges = frozenset(e for c in seen for e in cycle_edges(c))
    verts = frozenset(v for c in seen for v in c)
    return CellComponent(mode, origin, frozenset(seen), edges, verts)


def _boundary_cycles(dec: CellDecomposition, comp: CellComponent) -> list[Cycle]:
    coords = dec.lattice.coords
    walk = outer_walk(coords, sorted(comp.edges))
    return sorted(canonical_cycle(c, coords) for c in split_closed_walk(walk))


def outermost_boundary_star(dec: CellDecomposition, comp: CellComponent) -> OutermostBoundary:
    """Cycles formed by the edges of the component graph on its unbounded face.

    Those edges lie on no cycle's interior, which is exactly the outermost
    boundary; cutting the unbounded-face walk at repeated vertices yields the
    individual cycles.
    """
    if comp.mode is not Adjacency.STAR:
        raise ValueError("star boundary needs a star component")
    return OutermostBoundary(tuple(_boundary_cycles(dec, comp)))


def outermost_boundary_plus(dec: CellDecomposition, comp: CellComponent) -> Cycle:
    if comp.mode is not Adjacency.PLUS:
        raise ValueError("plus boundary needs a plus component")
    cycles = _boundary_cycles(dec, comp)
    if len(cycles) != 1:
        raise PerclatError(f"plus component boundary split into {len(cycles)} cycles")
    return cycles[0]


def cycle_graph(cycles: Sequence[Cycle]) -> dict[int, dict[int, object]]:
    """Cycle indices joined when they share a corner, labelled by the lowest shared vertex."""
    adj: dict[int, dict[int, object]] = {i: {} for i in range(len(cycles))}
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            shared = set(cycles[i]) & set(cycles[j])
            if shared:
                w = min(shared)
                adj[i][j] = w
                adj[j][i] = w
    return adj


def _rotate_to(cycle: tuple, vertex) -> list:
    k = cycle.index(vertex)
    return list(cycle[k:] + cycle[:k])


def euler_circuit(ob: OutermostBoundary) -> tuple:
    """Closed walk through every boundary edge once, as a vertex sequence.

    Cycles are spliced in breadth-first order of a spanning tree of the
    cycle graph, rooted at the lowest cycle; each child is inserted at the
    first occurrence of its lowest shared corner.
    """
    cycles = sorted(ob.cycles)
    if not cycles:
        raise ValueError("boundary has no cycles")
    adj = cycle_graph(cycles)
    circuit = list(cycles[0])
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in sorted(adj[i]):
            if j in seen:
                continue
            seen.add(j)
            queue.append(j)
            w = adj[i][j]
            k = circuit.index(w)
            circuit[k:k + 1] = _rotate_to(cycles[j], w) + [w]
    if len(seen) != len(cycles):
        raise PerclatError("boundary cycles are not connected")
    return tuple(circuit + [circuit[0]])


def with_euler(ob: OutermostBoundary) -> OutermostBoundary:
    return OutermostBoundary(ob.cycles, euler_circuit(ob))

