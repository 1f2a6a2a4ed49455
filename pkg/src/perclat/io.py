"""Line-oriented lattice documents and lattice name shorthands.

A document looks like::

    perclat-lattice 1
    vertex 0 0.0 0.0
    vertex 1 1.0 0.0
    edge 0 1
    site NAME 0,1,5,4 1,2,6,5
    origin NAME 0,1,5,4
    bond NAME 0,1 1,2

Records may come in any order; ``#`` starts a comment. Cells are written
as their canonical boundary and edges as vertex pairs.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

from .errors import InputError
from .generators import BondConfig, SiteConfig, gen_perturbed_lattice, gen_square_lattice
from .lattice import PlanarLattice, decompose_cells, edge_key, validate_lattice

MAGIC = "perclat-lattice"
VERSION = 1
_ID = re.compile(r"^[A-Za-z0-9_.-]+$")


class LatticeSyntaxError(InputError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]
        if toks:
            yield lineno, toks


def _vid(tok: str):
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def parse_lattice(text: str) -> tuple[PlanarLattice, dict]:
    """Parse a document into a validated lattice and its named configurations."""
    lines = list(_tokens(text))
    if not lines:
        raise LatticeSyntaxError("empty document", 1, 1)
    lineno, head = lines[0]
    if head[0][0] != MAGIC or len(head) != 2:
        raise LatticeSyntaxError(f"expected '{MAGIC} {VERSION}' header", lineno, head[0][1])
    if head[1][0] != str(VERSION):
        raise LatticeSyntaxError(f"unsupported version {head[1][0]!r}", lineno, head[1][1])
    coords: dict = {}
    edges: list = []
    edge_refs: list = []
    site_recs: list = []
    bond_recs: list = []
    origins: dict = {}
    for lineno, toks in lines[1:]:
        kind, col = toks[0]
        args = toks[1:]
        if kind == "vertex":
            if len(args) != 3:
                raise LatticeSyntaxError("vertex needs an id and two coordinates", lineno, col)
            if not _ID.match(args[0][0]):
                raise LatticeSyntaxError(f"bad vertex id {args[0][0]!r}", lineno, args[0][1])
            vid = _vid(args[0][0])
            if vid in coords:
                raise LatticeSyntaxError(f"duplicate vertex {vid!r}", lineno, args[0][1])
            try:
                coords[vid] = (float(args[1][0]), float(args[2][0]))
            except ValueError:
                bad = args[1] if not _is_float(args[1][0]) else args[2]
                raise LatticeSyntaxError(f"bad coordinate {bad[0]!r}", lineno, bad[1]) from None
        elif kind == "edge":
            if len(args) != 2:
                raise LatticeSyntaxError("edge needs two vertex ids", lineno, col)
            edges.append((_vid(args[0][0]), _vid(args[1][0])))
            edge_refs.append((lineno, args))
        elif kind == "site":
            if not args:
                raise LatticeSyntaxError("site config needs a name", lineno, col)
            site_recs.append((lineno, args[0][0], args[1:]))
        elif kind == "bond":
            if not args:
                raise LatticeSyntaxError("bond config needs a name", lineno, col)
            bond_recs.append((lineno, args[0][0], args[1:]))
        elif kind == "origin":
            if len(args) != 2:
                raise LatticeSyntaxError("origin needs a config name and a cell", lineno, col)
            origins[args[0][0]] = (lineno, args[1])
        else:
            raise LatticeSyntaxError(f"unknown record {kind!r}", lineno, col)
    for (lineno, args), e in zip(edge_refs, edges):
        for (tok, col), v in zip(args, e):
            if v not in coords:
                raise LatticeSyntaxError(f"edge refers to unknown vertex {tok!r}", lineno, col)
    lat = validate_lattice(coords, edges)
    configs: dict = {}
    if site_recs or bond_recs:
        dec = decompose_cells(lat)

        def cell_of(tok, lineno, col):
            verts = [_vid(t) for t in tok.split(",")]
            try:
                return dec.lookup(verts)
            except (KeyError, ValueError):
                raise LatticeSyntaxError(f"no cell with boundary {tok!r}", lineno, col) from None

        for lineno, name, cells in site_recs:
            occ = frozenset(cell_of(t, lineno, c) for t, c in cells)
            origin = None
            if name in origins:
                oline, (tok, col) = origins[name]
                origin = cell_of(tok, oline, col)
                if origin not in occ:
                    raise LatticeSyntaxError("origin cell is not occupied", oline, col)
            configs[name] = SiteConfig(occ, origin)
        for lineno, name, toks in bond_recs:
            opened = set()
            for tok, col in toks:
                parts = [_vid(t) for t in tok.split(",")]
                if len(parts) != 2 or not lat.has_edge(*parts):
                    raise LatticeSyntaxError(f"no edge {tok!r}", lineno, col)
                opened.add(edge_key(*parts))
            configs[name] = BondConfig(frozenset(opened), frozenset(lat.edges) - opened)
    for name, (oline, (tok, col)) in origins.items():
        if name not in configs:
            raise LatticeSyntaxError(f"origin for unknown config {name!r}", oline, 1)
    return lat, configs


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _fmt_id(v) -> str:
    return str(v)


def serialize_lattice(lat: PlanarLattice, configs: dict | None = None) -> str:
    out = [f"{MAGIC} {VERSION}"]
    for v in sorted(lat.coords):
        x, y = lat.coords[v]
        out.append(f"vertex {_fmt_id(v)} {x!r} {y!r}")
    for u, v in sorted(lat.edges):
        out.append(f"edge {_fmt_id(u)} {_fmt_id(v)}")
    for name in sorted(configs or {}):
        cfg = configs[name]
        if isinstance(cfg, SiteConfig):
            cells = " ".join(",".join(map(_fmt_id, c)) for c in sorted(cfg.occupied))
            out.append(f"site {name} {cells}".rstrip())
            if cfg.origin_cell is not None:
                out.append(f"origin {name} {','.join(map(_fmt_id, cfg.origin_cell))}")
        else:
            es = " ".join(f"{_fmt_id(u)},{_fmt_id(v)}" for u, v in sorted(cfg.open_edges))
            out.append(f"bond {name} {es}".rstrip())
    return "\n".join(out) + "\n"


def read_lattice(path: str | os.PathLike) -> tuple[PlanarLattice, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_lattice(text)


_GRID = re.compile(r"^grid(\d+)x(\d+)$")
_PERT = re.compile(r"^perturbed(\d+)x(\d+)(?::([0-9.]+))?(?::(\d+))?$")


def resolve_lattice(spec: str) -> tuple[PlanarLattice, dict]:
    """A lattice file path, ``gridNxM``, ``perturbedNxM[:delta[:seed]]`` or ``fixture:NAME``."""
    m = _GRID.match(spec)
    if m:
        return gen_square_lattice(int(m[1]), int(m[2])), {}
    m = _PERT.match(spec)
    if m:
        delta = float(m[3]) if m[3] else 0.2
        seed = int(m[4]) if m[4] else 0
        return gen_perturbed_lattice(int(m[1]), int(m[2]), delta, seed), {}
    if spec.startswith("fixture:"):
        from . import fixtures

        name = spec.split(":", 1)[1]
        if name not in fixtures.ALL:
            raise InputError(f"unknown fixture {name!r}; choose from {', '.join(sorted(fixtures.ALL))}")
        fx = fixtures.ALL[name]()
        configs = {}
        if fx.occupied:
            occ = frozenset(fx.cell(n) for n in fx.occupied)
            configs["default"] = SiteConfig(occ, min(occ))
        return fx.lattice, configs
    if os.path.exists(spec):
        return read_lattice(spec)
    raise InputError(f"{spec!r} is neither a file nor a lattice shorthand")
