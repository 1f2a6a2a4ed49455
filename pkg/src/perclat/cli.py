"""Command line interface.

Exit status is 0 on success, 1 when a checked property fails and 2 on bad
input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verify as V
from .boundary import component, outermost_boundary_plus, outermost_boundary_star, with_euler
from .crossings import build_rectangle_cover, check_bond_duality, check_site_duality, site_events
from .dual import construct_dual, vacant_cell_cycle_around_plus, vacant_dual_cycle_around_star, verify_duality_properties
from .errors import DualityViolation, InputError, OriginVacant, PerclatError, UnknownCell, UnknownEdge
from .experiment import ExperimentSpec, central_cell, default_rect, run_experiment
from .generators import BondConfig, SiteConfig, sample_config
from .io import _vid, resolve_lattice
from .lattice import Adjacency, decompose_cells, edge_key, shell_cycles
from .svg import SceneSpec, render_svg

OK, VIOLATION, BAD_INPUT = 0, 1, 2


def _fmt(x) -> str:
    return " ".join(map(str, x))


def _parse_cells(dec, text: str):
    out = []
    for tok in filter(None, (t.strip() for t in text.split(";"))):
        try:
            out.append(dec.lookup([_vid(v) for v in tok.split(",")]))
        except (KeyError, ValueError):
            raise InputError(f"no cell with boundary {tok!r}") from None
    return out


def _rect(args, lat):
    if args.rect:
        parts = args.rect.split(",")
        if len(parts) != 4:
            raise InputError("--rect needs x0,y0,x1,y1")
        try:
            from .crossings import Rect

            return Rect(*map(float, parts))
        except ValueError:
            raise InputError(f"bad rectangle {args.rect!r}") from None
    return default_rect(lat, args.margin)


def _site_config(args, dec, configs, target=None, need_origin=True) -> SiteConfig:
    origin = _parse_cells(dec, args.origin)[0] if args.origin else None
    name = args.config
    if not name and args.occupied is None and args.random is None and "default" in configs:
        name = "default"
    if name:
        if name not in configs:
            raise InputError(f"no config named {name!r}")
        cfg = configs[name]
        if not isinstance(cfg, SiteConfig):
            raise InputError(f"config {name!r} is not a site config")
        if origin is None:
            origin = cfg.origin_cell
        occ = cfg.occupied
    elif args.occupied is not None:
        occ = frozenset(_parse_cells(dec, args.occupied))
    elif args.random is not None:
        if need_origin and origin is None:
            origin = central_cell(dec)
        cfg = sample_config(target or dec, "site", args.random, args.seed, 0, origin if need_origin else None)
        occ = cfg.occupied
    else:
        raise InputError("give --config, --occupied or --random")
    if need_origin:
        if args.origin and origin not in occ and args.random is None:
            raise OriginVacant(f"origin cell {_fmt(origin)} is vacant")
        if origin is None:
            origin = min(occ) if occ else None
        if origin is None:
            raise InputError("no occupied cell to start from")
        return SiteConfig(frozenset(occ) | {origin}, origin)
    return SiteConfig(frozenset(occ))


def _bond_config(args, lat, configs, cover) -> BondConfig:
    if args.config:
        cfg = configs.get(args.config)
        if not isinstance(cfg, BondConfig):
            raise InputError(f"no bond config named {args.config!r}")
        opened = cfg.open_edges & cover.interior_edges
    elif args.open is not None:
        opened = set()
        for tok in filter(None, (t.strip() for t in args.open.split(";"))):
            parts = [_vid(v) for v in tok.split(",")]
            if len(parts) != 2 or not lat.has_edge(*parts):
                raise InputError(f"no edge {tok!r}")
            opened.add(edge_key(*parts))
        opened = frozenset(opened)
    elif args.random is not None:
        return sample_config(cover, "bond", args.random, args.seed)
    else:
        raise InputError("give --config, --open or --random")
    return BondConfig(frozenset(opened), cover.interior_edges - opened)


def _emit(args, data, lines) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True, default=_default))
    else:
        for line in lines:
            print(line)


def _default(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return str(x)


def cmd_validate(args) -> int:
    lat, configs = resolve_lattice(args.lattice)
    dec = decompose_cells(lat)
    data = {"vertices": len(lat.coords), "edges": len(lat.edges), "cells": len(dec.cells), "configs": sorted(configs)}
    _emit(args, data, [f"valid lattice: {data['vertices']} vertices, {data['edges']} edges, {data['cells']} cells"])
    return OK


def cmd_cells(args) -> int:
    dec = decompose_cells(resolve_lattice(args.lattice)[0])
    _emit(args, {"cells": dec.ids}, [_fmt(c) for c in dec.ids])
    return OK


def cmd_shells(args) -> int:
    dec = decompose_cells(resolve_lattice(args.lattice)[0])
    shells = list(shell_cycles(dec).shells)
    _emit(args, {"shells": shells}, [_fmt(c) for c in shells])
    return OK


def cmd_boundary(args) -> int:
    lat, configs = resolve_lattice(args.lattice)
    dec = decompose_cells(lat)
    cfg = _site_config(args, dec, configs)
    mode = Adjacency(args.mode)
    comp = component(dec, cfg, mode)
    problems: list[str] = []
    if mode is Adjacency.STAR:
        ob = with_euler(outermost_boundary_star(dec, comp))
        if args.check:
            problems = V.check_star_boundary(dec, cfg, comp, ob) + V.check_euler(ob, ob.euler_circuit)
        data = {"cycles": list(ob.cycles), "euler_circuit": list(ob.euler_circuit)}
        lines = [f"cycle {_fmt(c)}" for c in ob.cycles] + [f"euler {_fmt(ob.euler_circuit)}"]
    else:
        cyc = outermost_boundary_plus(dec, comp)
        if args.check:
            problems = V.check_plus_boundary(dec, cfg, comp, cyc)
        data = {"cycles": [cyc]}
        lines = [f"cycle {_fmt(cyc)}"]
    data["component"] = sorted(comp.cells)
    data["violations"] = problems
    _emit(args, data, lines + [f"violation: {p}" for p in problems])
    return VIOLATION if problems else OK


def cmd_dual(args) -> int:
    dec = decompose_cells(resolve_lattice(args.lattice)[0])
    dual = construct_dual(dec, strict=False)
    data = {"dual_vertices": len(dual.dual_vertices), "dual_edges": len(dual.dual_edges), "issues": list(dual.issues)}
    lines = [f"dual: {len(dual.dual_vertices)} vertices, {len(dual.dual_edges)} edges"]
    lines += [f"issue: {i}" for i in dual.issues]
    status = OK
    if args.verify:
        rep = verify_duality_properties(dec, dual)
        data["properties"] = {
            k: {"passed": r.passed, "detail": r.detail, "counterexample": r.counterexample}
            for k, r in rep.results().items()
        }
        for k, r in rep.results().items():
            lines.append(f"{k}: {'pass' if r.passed else 'FAIL'}" + ("" if r.passed else f" ({r.detail})"))
        status = OK if rep.all_passed else VIOLATION
    _emit(args, data, lines)
    return status


def cmd_surround(args) -> int:
    lat, configs = resolve_lattice(args.lattice)
    dec = decompose_cells(lat)
    cfg = _site_config(args, dec, configs)
    if args.mode == "star":
        dual = construct_dual(dec)
        comp = component(dec, cfg, Adjacency.STAR)
        cyc = vacant_dual_cycle_around_star(dec, dual, comp, cfg, exhaustive=args.exhaustive)
        _emit(args, {"p_out": list(cyc)}, [f"dual vertex {_fmt(c)}" for c in cyc])
        return OK
    comp = component(dec, cfg, Adjacency.PLUS)
    cells = vacant_cell_cycle_around_plus(dec, cfg, comp)
    problems = V.check_m_out(dec, cfg, comp, outermost_boundary_plus(dec, comp), cells)
    _emit(args, {"m_out": list(cells), "violations": problems},
          [f"cell {_fmt(c)}" for c in cells] + [f"violation: {p}" for p in problems])
    return VIOLATION if problems else OK


def cmd_cross(args) -> int:
    lat, configs = resolve_lattice(args.lattice)
    dec = decompose_cells(lat)
    cover = build_rectangle_cover(dec, _rect(args, lat))
    status = OK
    if args.bond:
        dual = construct_dual(dec)
        bonds = _bond_config(args, lat, configs, cover)
        try:
            rep = check_bond_duality(cover, dual, bonds)
        except DualityViolation as exc:
            rep, status = exc.report, VIOLATION
    else:
        cfg = _site_config(args, dec, configs, target=cover, need_origin=False)
        cfg = SiteConfig(cfg.occupied & cover.interior_cells)
        try:
            rep = check_site_duality(cover, cfg)
        except DualityViolation as exc:
            rep, status = exc.report, VIOLATION
    lines = []
    for k in rep.events:
        w = rep.witnesses[k]
        lines.append(f"{k}: {'yes' if rep.events[k] else 'no'}" + (f"  via {' | '.join(map(str, w))}" if w else ""))
    if status:
        lines.append("duality violated")
    _emit(args, {"events": dict(rep.events), "witnesses": dict(rep.witnesses), "xor": rep.xor_holds()}, lines)
    return status


def cmd_experiment(args) -> int:
    try:
        text = Path(args.spec).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.spec}: {exc.strerror}") from None
    spec = ExperimentSpec.from_json(text)
    if args.workers is not None:
        spec = ExperimentSpec.from_dict({**spec.__dict__, "workers": args.workers})
    report = run_experiment(spec)
    if args.json:
        print(report.to_json(timing=args.timing))
    else:
        print(f"trials: {report.trials}")
        for name, c in report.checks.items():
            print(f"{name}: violations={c['violations']} checked={c['checked']} skipped={c['skipped']}")
        for name, e in report.estimates.items():
            lo, hi = e["ci95"]
            print(f"P({name}) = {e['frequency']:.4f}  [{lo:.4f}, {hi:.4f}]")
        for name, s in report.xor_sums.items():
            print(f"{name} = {s}")
        if report.duality_failure:
            print(f"duality property {report.duality_failure} fails on this lattice")
        if args.timing:
            print(f"timing: {report.timing}")
    return OK if report.passed else VIOLATION


def cmd_render(args) -> int:
    lat, configs = resolve_lattice(args.lattice)
    dec = decompose_cells(lat)
    scene = {"dec": dec, "title": args.lattice}
    if args.config or args.occupied is not None or args.random is not None or "default" in configs:
        cfg = _site_config(args, dec, configs)
        scene["occupied"] = cfg.occupied
        comp = component(dec, cfg, Adjacency(args.mode))
        if comp.mode is Adjacency.STAR:
            ob = with_euler(outermost_boundary_star(dec, comp))
            scene["boundary"], scene["euler"] = ob.cycles, ob.euler_circuit
        else:
            scene["boundary"] = (outermost_boundary_plus(dec, comp),)
    if args.dual:
        scene["dual"] = construct_dual(dec, strict=False)
    if args.rect or args.cover:
        cover = build_rectangle_cover(dec, _rect(args, lat))
        scene["rect"], scene["classification"] = cover.rect, cover.classification
        occ = SiteConfig(frozenset(scene.get("occupied", ())) & cover.interior_cells)
        rep = site_events(cover, occ)
        scene["cell_paths"] = tuple(w for w in rep.witnesses.values() if w)
    svg = render_svg(SceneSpec(**scene))
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return OK


def _config_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="named configuration from the lattice file")
    p.add_argument("--occupied", help="occupied cells as 'v,v,v;v,v,v'")
    p.add_argument("--random", type=float, metavar="P", help="sample occupancy with probability P")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--origin", help="origin cell as 'v,v,v'")


def _rect_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rect", help="rectangle x0,y0,x1,y1")
    p.add_argument("--margin", type=float, default=0.5, help="inset of the default rectangle")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="perclat", description="Percolation on irregular planar lattices.")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)
    lat_help = "lattice file, gridNxM, perturbedNxM[:delta[:seed]] or fixture:NAME"

    p = sub.add_parser("validate", help="check a lattice")
    p.add_argument("lattice", help=lat_help)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cells", help="list canonical cells")
    p.add_argument("lattice", help=lat_help)
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("shells", help="list shell cycles")
    p.add_argument("lattice", help=lat_help)
    p.set_defaults(func=cmd_shells)

    p = sub.add_parser("boundary", help="outermost boundary of the origin's component")
    p.add_argument("lattice", help=lat_help)
    p.add_argument("--mode", choices=["star", "plus"], default="star")
    p.add_argument("--check", action="store_true", help="verify the boundary properties")
    _config_opts(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("dual", help="construct the dual lattice")
    p.add_argument("lattice", help=lat_help)
    p.add_argument("--verify", action="store_true", help="check duality properties a1-a5")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("surround", help="vacant cycle around the origin's component")
    p.add_argument("lattice", help=lat_help)
    p.add_argument("--mode", choices=["star", "plus"], default="star")
    p.add_argument("--exhaustive", action="store_true", help="merge in every surrounding dual cycle")
    _config_opts(p)
    p.set_defaults(func=cmd_surround)

    p = sub.add_parser("cross", help="rectangle crossings and their duality")
    p.add_argument("lattice", help=lat_help)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--site", action="store_true", help="site percolation (default)")
    kind.add_argument("--bond", action="store_true", help="bond percolation")
    p.add_argument("--open", help="open edges as 'u,v;u,v' (bond)")
    _config_opts(p)
    _rect_opts(p)
    p.set_defaults(func=cmd_cross)

    p = sub.add_parser("experiment", help="run an experiment spec")
    p.add_argument("--spec", required=True, help="JSON experiment spec")
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true", help="include wall-clock timing")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("render", help="render a lattice scene as SVG")
    p.add_argument("lattice", help=lat_help)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--mode", choices=["star", "plus"], default="star")
    p.add_argument("--dual", action="store_true", help="overlay the dual lattice")
    p.add_argument("--cover", action="store_true", help="tint the rectangle cover")
    _config_opts(p)
    _rect_opts(p)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, OriginVacant, UnknownCell, UnknownEdge) as exc:
        print(f"perclat: error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except PerclatError as exc:
        print(f"perclat: {exc}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
