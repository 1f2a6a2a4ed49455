"""Deterministic lattice generators and random configurations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .lattice import CellDecomposition, CellId, Edge, PlanarLattice, validate_lattice

MAX_RETRIES = 20


def grid_id(i: int, j: int, n: int) -> int:
    return j * (n + 1) + i


def _grid_edges(n: int, m: int) -> list[tuple[int, int]]:
    edges = []
    for j in range(m + 1):
        for i in range(n + 1):
            if i < n:
                edges.append((grid_id(i, j, n), grid_id(i + 1, j, n)))
            if j < m:
                edges.append((grid_id(i, j, n), grid_id(i, j + 1, n)))
    return edges


def gen_square_lattice(n: int, m: int) -> PlanarLattice:
    """Unit square lattice with vertices ``(i, j)``, ``0 <= i <= n``, ``0 <= j <= m``.

    Vertex ``(i, j)`` gets the integer id ``j * (n + 1) + i``.
    """
    if n < 1 or m < 1:
        raise InputError("square lattice needs n, m >= 1")
    coords = {grid_id(i, j, n): (float(i), float(j)) for j in range(m + 1) for i in range(n + 1)}
    return validate_lattice(coords, _grid_edges(n, m))


def trial_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for ``(seed, *stream)``; no shared state."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


def gen_perturbed_lattice(n: int, m: int, delta: float, seed: int) -> PlanarLattice:
    """Square lattice whose strictly interior vertices are jittered in ``[-delta, delta]^2``.

    Each attempt is re-validated; a failed attempt retries with the next
    sub-seed, at most ``MAX_RETRIES`` times.
    """
    if not 0 <= delta < 0.5:
        raise InputError("jitter must satisfy 0 <= delta < 0.5")
    if n < 1 or m < 1:
        raise InputError("perturbed lattice needs n, m >= 1")
    last = None
    for attempt in range(MAX_RETRIES):
        rng = trial_rng(seed, attempt)
        jitter = rng.uniform(-delta, delta, size=(m + 1, n + 1, 2)) if delta > 0 else np.zeros((m + 1, n + 1, 2))
        coords = {}
        for j in range(m + 1):
            for i in range(n + 1):
                x, y = float(i), float(j)
                if 0 < i < n and 0 < j < m:
                    x += float(jitter[j, i, 0])
                    y += float(jitter[j, i, 1])
                coords[grid_id(i, j, n)] = (x, y)
        try:
            return validate_lattice(coords, _grid_edges(n, m))
        except InputError as exc:
            last = exc
    raise InputError(f"no valid perturbed lattice after {MAX_RETRIES} attempts: {last}")


@dataclass(frozen=True)
class SiteConfig:
    occupied: frozenset
    origin_cell: CellId | None = None

    def __post_init__(self):
        if self.origin_cell is not None and self.origin_cell not in self.occupied:
            raise InputError("origin cell must be occupied")

    def is_occupied(self, cid: CellId) -> bool:
        return cid in self.occupied


@dataclass(frozen=True)
class BondConfig:
    open_edges: frozenset
    closed_edges: frozenset = field(default_factory=frozenset)

    def is_open(self, e: Edge) -> bool:
        return e in self.open_edges


def sample_site_config(
    units: list[CellId], p: float, seed: int, trial: int = 0, origin: CellId | None = None
) -> SiteConfig:
    """Bernoulli(p) occupancy over ``units`` in the given order.

    ``origin`` is forced occupied when given.
    """
    if not 0 <= p <= 1:
        raise InputError("p must lie in [0, 1]")
    draws = trial_rng(seed, trial).random(len(units))
    occ = {u for u, r in zip(units, draws) if r < p}
    if origin is not None:
        occ.add(origin)
    return SiteConfig(frozenset(occ), origin)


def sample_bond_config(edges: list[Edge], p: float, seed: int, trial: int = 0) -> BondConfig:
    if not 0 <= p <= 1:
        raise InputError("p must lie in [0, 1]")
    draws = trial_rng(seed, trial).random(len(edges))
    opened = frozenset(e for e, r in zip(edges, draws) if r < p)
    return BondConfig(opened, frozenset(edges) - opened)


def sample_config(target, mode: str, p: float, trial_seed: int, trial: int = 0, origin: CellId | None = None):
    """Random configuration on a decomposition or a rectangle cover.

    Site mode draws one state per cell of a decomposition, or per interior
    cell of a cover; bond mode draws one state per interior edge of a cover.
    """
    from .crossings import RectangleCover

    if mode == "site":
        if isinstance(target, RectangleCover):
            units = sorted(target.interior_cells)
        elif isinstance(target, CellDecomposition):
            units = target.ids
        else:
            raise TypeError("site sampling needs a CellDecomposition or RectangleCover")
        return sample_site_config(units, p, trial_seed, trial, origin)
    if mode == "bond":
        if not isinstance(target, RectangleCover):
            raise TypeError("bond sampling needs a RectangleCover")
        return sample_bond_config(sorted(target.interior_edges), p, trial_seed, trial)
    raise InputError(f"unknown mode {mode!r}")
