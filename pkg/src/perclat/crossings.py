"""Rectangle covers, site crossings and bond crossings with their duality checks."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import geometry as geo
from .dual import DualLattice
from .errors import (
    DualityViolation,
    HypothesisViolated,
    InputError,
    NotNicelyCovered,
    NotNicelyPadded,
    VertexOnSide,
)
from .generators import BondConfig, SiteConfig
from .geometry import EPS, Location, Point
from .lattice import Adjacency, CellDecomposition, CellId, Edge, cycle_edges


class CellClass(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    TOP = "top"
    BOTTOM = "bottom"
    CORNER_TL = "corner_tl"
    CORNER_TR = "corner_tr"
    CORNER_BL = "corner_bl"
    CORNER_BR = "corner_br"
    INTERIOR = "interior"
    OUTSIDE = "outside"


SIDES = ("left", "bottom", "right", "top")
CORNERS = {
    CellClass.CORNER_TL: ("top", "left"),
    CellClass.CORNER_BL: ("left", "bottom"),
    CellClass.CORNER_BR: ("bottom", "right"),
    CellClass.CORNER_TR: ("right", "top"),
}
SIDE_CLASS = {"left": CellClass.LEFT, "right": CellClass.RIGHT, "top": CellClass.TOP, "bottom": CellClass.BOTTOM}


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InputError("rectangle needs x0 < x1 and y0 < y1")

    def corners(self) -> dict[CellClass, Point]:
        return {
            CellClass.CORNER_TL: (self.x0, self.y1),
            CellClass.CORNER_BL: (self.x0, self.y0),
            CellClass.CORNER_BR: (self.x1, self.y0),
            CellClass.CORNER_TR: (self.x1, self.y1),
        }

    def side_segment(self, side: str) -> tuple[Point, Point]:
        return {
            "left": ((self.x0, self.y1), (self.x0, self.y0)),
            "bottom": ((self.x0, self.y0), (self.x1, self.y0)),
            "right": ((self.x1, self.y0), (self.x1, self.y1)),
            "top": ((self.x1, self.y1), (self.x0, self.y1)),
        }[side]

    def strictly_inside(self, p: Point) -> bool:
        return self.x0 < p[0] < self.x1 and self.y0 < p[1] < self.y1

    def on_boundary(self, p: Point) -> bool:
        x, y = p
        on_v = (abs(x - self.x0) <= EPS or abs(x - self.x1) <= EPS) and self.y0 - EPS <= y <= self.y1 + EPS
        on_h = (abs(y - self.y0) <= EPS or abs(y - self.y1) <= EPS) and self.x0 - EPS <= x <= self.x1 + EPS
        return on_v or on_h

    def perimeter_position(self, side: str, p: Point) -> float:
        # counterclockwise arc length from the top-left corner
        w, h = self.x1 - self.x0, self.y1 - self.y0
        if side == "left":
            return self.y1 - p[1]
        if side == "bottom":
            return h + p[0] - self.x0
        if side == "right":
            return h + w + p[1] - self.y0
        return 2 * h + w + self.x1 - p[0]


@dataclass(frozen=True)
class CutEdge:
    edge: Edge
    inner: object
    outer: object
    side: str
    point: Point
    position: float


@dataclass(frozen=True)
class RectangleCover:
    dec: CellDecomposition = field(repr=False)
    rect: Rect
    classification: Mapping[CellId, CellClass] = field(repr=False)
    cut_edges: Mapping[str, tuple[CutEdge, ...]] = field(repr=False)
    side_cells: Mapping[str, tuple[CellId, ...]] = field(repr=False)
    corner_cells: Mapping[CellClass, CellId] = field(repr=False)
    interior_cells: frozenset = field(repr=False)
    interior_edges: frozenset = field(repr=False)
    interior_paths: Mapping[str, tuple[tuple, ...]] = field(repr=False)
    perimeter: tuple[CellId, ...] = field(repr=False)
    has_plus_lr: bool = True
    has_plus_td: bool = True

    def cells_of(self, cls: CellClass) -> list[CellId]:
        return sorted(c for c, k in self.classification.items() if k is cls)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for k in self.classification.values():
            out[k.value] = out.get(k.value, 0) + 1
        return out


def _cut_record(rect: Rect, lat, e: Edge, inside: Mapping) -> CutEdge | None:
    u, v = e
    if inside[u] == inside[v]:
        return None
    inner, outer = (u, v) if inside[u] else (v, u)
    seg = lat.segment(e)
    for side in SIDES:
        a, b = rect.side_segment(side)
        if geo.segments_properly_intersect(seg, (a, b)):
            (x1, y1), (x2, y2) = seg
            if side in ("left", "right"):
                x = a[0]
                t = (x - x1) / (x2 - x1)
                p = (x, y1 + t * (y2 - y1))
            else:
                y = a[1]
                t = (y - y1) / (y2 - y1)
                p = (x1 + t * (x2 - x1), y)
            return CutEdge(e, inner, outer, side, p, rect.perimeter_position(side, p))
    raise NotNicelyCovered("cut edge", e)


def _contiguous(flags: Sequence[bool]) -> bool:
    n = len(flags)
    return sum(1 for i in range(n) if flags[i] != flags[(i + 1) % n]) == 2


def build_rectangle_cover(dec: CellDecomposition, rect: Rect | Sequence[float]) -> RectangleCover:
    """Classify every cell against ``rect`` and check the cover conditions.

    Raises VertexOnSide, NotNicelyCovered(clause, witness) or
    NotNicelyPadded(cell pair) for the first violated condition.
    """
    if not isinstance(rect, Rect):
        rect = Rect(*map(float, rect))
    lat = dec.lattice
    for v in sorted(lat.coords):
        if rect.on_boundary(lat.coords[v]):
            raise VertexOnSide(v)
    inside = {v: rect.strictly_inside(p) for v, p in lat.coords.items()}
    cuts: dict[Edge, CutEdge] = {}
    interior_edges = set()
    for e in lat.edges:
        if inside[e[0]] and inside[e[1]]:
            interior_edges.add(e)
            continue
        rec = _cut_record(rect, lat, e, inside)
        if rec is not None:
            cuts[e] = rec
            continue
        seg = lat.segment(e)
        if any(geo.segments_properly_intersect(seg, rect.side_segment(s)) for s in SIDES):
            raise NotNicelyCovered("edge crosses the rectangle with both ends outside", e)

    corner_pts = rect.corners()
    cls: dict[CellId, CellClass] = {}
    corner_cells: dict[CellClass, CellId] = {}
    interior_paths: dict[str, list] = {s: [] for s in SIDES}
    for cell in dec.cells:
        cid = cell.cell_id
        holds = []
        for k, p in corner_pts.items():
            loc = geo.point_in_polygon(p, cell.polygon, check=False)
            if loc is Location.BOUNDARY:
                raise NotNicelyCovered("rectangle corner on a lattice edge", cid)
            if loc is Location.INSIDE:
                holds.append(k)
        flags = [inside[v] for v in cid]
        mycuts = [cuts[e] for e in cell.edges if e in cuts]
        sides = sorted({c.side for c in mycuts})
        if len(holds) > 1:
            raise NotNicelyCovered("cell holds several rectangle corners", cid)
        if holds:
            k = holds[0]
            if sorted(c.side for c in mycuts) != sorted(CORNERS[k]):
                raise NotNicelyCovered("corner cell must cut each adjacent side once", cid)
            if sum(flags) != 1:
                raise NotNicelyCovered("corner cell must have a single interior vertex", cid)
            cls[cid] = k
            corner_cells[k] = cid
        elif all(flags):
            cls[cid] = CellClass.INTERIOR
        elif not any(flags):
            cls[cid] = CellClass.OUTSIDE
        else:
            if len(sides) != 1 or len(mycuts) != 2:
                raise NotNicelyCovered("side cell must cut exactly one side twice", cid)
            if not _contiguous(flags):
                raise NotNicelyCovered("side cell interior vertices are not a single path", cid)
            cls[cid] = SIDE_CLASS[sides[0]]
            n = len(cid)
            start = next(i for i in range(n) if flags[i] and not flags[i - 1])
            path = []
            i = start
            while flags[i % n]:
                path.append(cid[i % n])
                i += 1
            interior_paths[sides[0]].append(tuple(path))
    missing = [k.value for k in corner_pts if k not in corner_cells]
    if missing:
        raise NotNicelyCovered("no cell holds the corner", missing)

    interior = frozenset(c for c, k in cls.items() if k is CellClass.INTERIOR)
    for k, cid in sorted(corner_cells.items()):
        bad = dec.plus_adj[cid] & interior
        if bad:
            raise NotNicelyCovered("corner cell plus adjacent to an interior cell", (cid, min(bad)))

    # perimeter chain
    order = sorted(cuts.values(), key=lambda c: c.position)
    chain: list[CellId] = []
    ring = {c for c, k in cls.items() if k not in (CellClass.INTERIOR, CellClass.OUTSIDE)}
    for i, cut in enumerate(order):
        nxt = order[(i + 1) % len(order)]
        between = [c for c in dec.edge_to_cells[cut.edge] if c in dec.edge_to_cells.get(nxt.edge, ())]
        between = [c for c in between if c in ring]
        if len(between) != 1 or (len(order) > 2 and between[0] in chain):
            raise NotNicelyCovered("perimeter cells do not form a chain", (cut.edge, nxt.edge))
        chain.append(between[0])
    if set(chain) != ring:
        raise NotNicelyCovered("cell straddles the rectangle off the perimeter chain", sorted(ring - set(chain)))
    pinch = {}
    for k, cid in corner_cells.items():
        (v,) = [x for x in cid if inside[x]]
        pinch[cid] = v
    pinch_vertices = set(pinch.values())
    m = len(chain)
    for i, cid in enumerate(chain):
        allowed = {chain[(i - 1) % m], chain[(i + 1) % m], cid}
        for other in dec.star_adj[cid] & ring:
            if other in allowed:
                continue
            common = set(cid) & set(other)
            if not common <= pinch_vertices:
                raise NotNicelyCovered("perimeter cells meet outside the chain", (cid, other))
    side_cells = {s: tuple(c for c in chain if cls[c] is SIDE_CLASS[s]) for s in SIDES}

    _check_padding(dec, rect, cls)
    cover = RectangleCover(
        dec=dec,
        rect=rect,
        classification=cls,
        cut_edges={s: tuple(c for c in order if c.side == s) for s in SIDES},
        side_cells=side_cells,
        corner_cells=corner_cells,
        interior_cells=interior,
        interior_edges=frozenset(interior_edges),
        interior_paths={s: tuple(v) for s, v in interior_paths.items()},
        perimeter=tuple(chain),
    )
    everything = SiteConfig(frozenset(interior))
    lr = _search(cover, everything, Adjacency.PLUS, "LR", True)
    td = _search(cover, everything, Adjacency.PLUS, "TD", True)
    object.__setattr__(cover, "has_plus_lr", lr is not None)
    object.__setattr__(cover, "has_plus_td", td is not None)
    return cover


def _check_padding(dec: CellDecomposition, rect: Rect, cls: Mapping[CellId, CellClass]) -> None:
    touching = {c for c, k in cls.items() if k is not CellClass.OUTSIDE}
    near = {c for c in dec.ids if c in touching or dec.star_adj[c] & touching}

    def hits(cid, axis, value):
        vals = [p[axis] for p in dec.by_id[cid].polygon]
        return min(vals) <= value <= max(vals)

    for lines, axis, a, b in (("top/bottom", 1, rect.y1, rect.y0), ("left/right", 0, rect.x0, rect.x1)):
        z1 = sorted(c for c in near if hits(c, axis, a))
        z2 = set(c for c in near if hits(c, axis, b))
        for c in z1:
            if c in z2:
                raise NotNicelyPadded((c, c), lines)
            bad = dec.star_adj[c] & z2
            if bad:
                raise NotNicelyPadded((c, min(bad)), lines)


# --------------------------------------------------------------------------
# site crossings
# --------------------------------------------------------------------------


def _endpoints(cover: RectangleCover, direction: str) -> tuple[list, set]:
    if direction == "LR":
        return list(cover.side_cells["left"]), set(cover.side_cells["right"])
    if direction == "TD":
        return list(cover.side_cells["top"]), set(cover.side_cells["bottom"])
    raise InputError(f"unknown direction {direction!r}")


def _search(cover: RectangleCover, cfg: SiteConfig, mode: Adjacency, direction: str, occupied: bool):
    dec = cover.dec
    sources, targets = _endpoints(cover, direction)
    parent: dict = {s: None for s in sorted(sources)}
    queue = deque(sorted(sources))
    src = set(sources)
    while queue:
        x = queue.popleft()
        for n in sorted(dec.neighbors(x, mode)):
            if n in targets and x not in src:
                path = [n, x]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            if n in parent or n not in cover.interior_cells:
                continue
            if (n in cfg.occupied) != occupied:
                continue
            parent[n] = x
            queue.append(n)
    return None


def find_site_crossing(
    cover: RectangleCover, cfg: SiteConfig, mode: Adjacency, direction: str, state: str
) -> tuple | None:
    """Cell path from the entry side to the exit side through interior cells in ``state``."""
    if state not in ("occupied", "vacant"):
        raise InputError(f"unknown state {state!r}")
    return _search(cover, cfg, Adjacency(mode), direction, state == "occupied")


def is_site_crossing(
    cover: RectangleCover, cfg: SiteConfig, path: Sequence, mode: Adjacency, direction: str, state: str
) -> bool:
    """Re-check every clause of the crossing definition on a returned path."""
    if path is None or len(path) < 3 or len(set(path)) != len(path):
        return False
    first, last = (CellClass.LEFT, CellClass.RIGHT) if direction == "LR" else (CellClass.TOP, CellClass.BOTTOM)
    cls = cover.classification
    if cls[path[0]] is not first or cls[path[-1]] is not last:
        return False
    want = state == "occupied"
    for c in path[1:-1]:
        if cls[c] is not CellClass.INTERIOR or (c in cfg.occupied) != want:
            return False
    mode = Adjacency(mode)
    for a, b in zip(path, path[1:]):
        shared = set(a) & set(b)
        if mode is Adjacency.STAR and not shared:
            return False
        if mode is Adjacency.PLUS and not set(cycle_edges(a)) & set(cycle_edges(b)):
            return False
    return True


SITE_EVENTS = {
    "LR+(O)": (Adjacency.PLUS, "LR", "occupied"),
    "TD*(V)": (Adjacency.STAR, "TD", "vacant"),
    "LR*(O)": (Adjacency.STAR, "LR", "occupied"),
    "TD+(V)": (Adjacency.PLUS, "TD", "vacant"),
}
SITE_PAIRS = (("LR+(O)", "TD*(V)"), ("LR*(O)", "TD+(V)"))


@dataclass(frozen=True)
class CrossingReport:
    events: Mapping[str, bool]
    witnesses: Mapping[str, tuple | None]
    pairs: tuple[tuple[str, str], ...]

    def xor_holds(self) -> bool:
        return all(self.events[a] != self.events[b] for a, b in self.pairs)


def site_events(cover: RectangleCover, cfg: SiteConfig) -> CrossingReport:
    w = {name: find_site_crossing(cover, cfg, *args) for name, args in SITE_EVENTS.items()}
    return CrossingReport({k: v is not None for k, v in w.items()}, w, SITE_PAIRS)


def check_site_duality(cover: RectangleCover, cfg: SiteConfig) -> CrossingReport:
    """Evaluate the four site events and require each complementary pair to be exclusive-or."""
    if not (cover.has_plus_lr and cover.has_plus_td):
        raise HypothesisViolated("lattice has no plus connected left-right and top-down crossing of the rectangle")
    report = site_events(cover, cfg)
    for a, b in report.pairs:
        if report.events[a] == report.events[b]:
            raise DualityViolation((a, b), report)
    return report


# --------------------------------------------------------------------------
# bond crossings
# --------------------------------------------------------------------------


def _check_bonds(cover: RectangleCover, bonds: BondConfig) -> None:
    stray = bonds.open_edges - cover.interior_edges
    if stray:
        raise InputError(f"open edge {min(stray)!r} is not inside the rectangle")


def find_bond_lr_crossing(cover: RectangleCover, bonds: BondConfig) -> tuple | None:
    """Open path entering through a left cut edge and leaving through a right one."""
    _check_bonds(cover, bonds)
    lat = cover.dec.lattice
    left: dict = {}
    for c in cover.cut_edges["left"]:
        left.setdefault(c.inner, c.outer)
    right: dict = {}
    for c in cover.cut_edges["right"]:
        right.setdefault(c.inner, c.outer)
    parent: dict = {v: None for v in sorted(left)}
    queue = deque(sorted(left))
    while queue:
        x = queue.popleft()
        for n in sorted(lat.neighbors(x)):
            e = (x, n) if x < n else (n, x)
            if e not in bonds.open_edges or n in parent:
                continue
            parent[n] = x
            if n in right:
                path = [n]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return (left[path[0]], *path, right[n])
            queue.append(n)
    return None


def is_bond_lr_crossing(cover: RectangleCover, bonds: BondConfig, path: Sequence) -> bool:
    if path is None or len(path) < 4 or len(set(path)) != len(path):
        return False
    lat = cover.dec.lattice
    rect = cover.rect
    for a, b in zip(path, path[1:]):
        if not lat.has_edge(a, b):
            return False
    if rect.strictly_inside(lat.coords[path[0]]) or rect.strictly_inside(lat.coords[path[-1]]):
        return False
    first = lat.segment((path[0], path[1]))
    last = lat.segment((path[-2], path[-1]))
    if not geo.segments_properly_intersect(first, rect.side_segment("left")):
        return False
    if not geo.segments_properly_intersect(last, rect.side_segment("right")):
        return False
    for a, b in zip(path[1:-1], path[2:-1]):
        e = (a, b) if a < b else (b, a)
        if e not in cover.interior_edges or e not in bonds.open_edges:
            return False
    return True


def find_dual_bond_td_crossing(cover: RectangleCover, dual: DualLattice, bonds: BondConfig) -> tuple | None:
    """Dual path from a top cell to a bottom cell crossing only closed interior edges."""
    _check_bonds(cover, bonds)
    usable: dict = {}
    for de in dual.dual_edges:
        e = dual.crossed[de]
        if e in cover.interior_edges and e not in bonds.open_edges:
            usable.setdefault(de[0], []).append(de[1])
            usable.setdefault(de[1], []).append(de[0])
    sources = cover.side_cells["top"]
    targets = set(cover.side_cells["bottom"])
    parent: dict = {s: None for s in sorted(sources)}
    queue = deque(sorted(sources))
    while queue:
        x = queue.popleft()
        for n in sorted(usable.get(x, ())):
            if n in parent:
                continue
            parent[n] = x
            if n in targets:
                path = [n]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            queue.append(n)
    return None


def is_dual_td_crossing(cover: RectangleCover, dual: DualLattice, bonds: BondConfig, path: Sequence) -> bool:
    if path is None or len(path) < 2 or len(set(path)) != len(path):
        return False
    cls = cover.classification
    if cls[path[0]] is not CellClass.TOP or cls[path[-1]] is not CellClass.BOTTOM:
        return False
    for a, b in zip(path, path[1:]):
        de = (a, b) if a < b else (b, a)
        if de not in dual.crossed:
            return False
        e = dual.crossed[de]
        if e not in cover.interior_edges or e in bonds.open_edges:
            return False
    return True


BOND_PAIRS = (("LR", "TD_d"),)


def bond_events(cover: RectangleCover, dual: DualLattice, bonds: BondConfig) -> CrossingReport:
    w = {"LR": find_bond_lr_crossing(cover, bonds), "TD_d": find_dual_bond_td_crossing(cover, dual, bonds)}
    return CrossingReport({k: v is not None for k, v in w.items()}, w, BOND_PAIRS)


def check_bond_duality(cover: RectangleCover, dual: DualLattice, bonds: BondConfig) -> CrossingReport:
    report = bond_events(cover, dual, bonds)
    if report.events["LR"] == report.events["TD_d"]:
        raise DualityViolation(("LR", "TD_d"), report)
    return report


def square_cover_rect(n: int, m: int, margin: float = 0.5) -> Rect:
    """The rectangle ``[margin, n - margin] x [margin, m - margin]`` used for grid covers."""
    return Rect(margin, margin, n - margin, m - margin)
