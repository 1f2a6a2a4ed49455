"""Experiment specs and a parallel, seed-deterministic trial runner."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Mapping

from scipy.stats import binomtest

from . import verify as V
from .boundary import component, outermost_boundary_plus, outermost_boundary_star, with_euler
from .crossings import Rect, build_rectangle_cover, check_bond_duality, check_site_duality
from .dual import (
    construct_dual,
    surrounds,
    vacant_cell_cycle_around_plus,
    vacant_dual_cycle_around_star,
    verify_duality_properties,
)
from .errors import DualityViolation, HypothesisViolated, InputError, MissingVacantNeighbor
from .generators import BondConfig, SiteConfig, gen_perturbed_lattice, gen_square_lattice, sample_config
from .lattice import Adjacency, CellDecomposition, PlanarLattice, decompose_cells

CROSSING_CHECKS = {"site_duality": "site", "bond_duality": "bond"}
COMPONENT_CHECKS = ("star_boundary", "plus_boundary", "euler", "star_surround", "plus_surround")
MAX_EXHAUSTIVE_UNITS = 20
BRUTE_FORCE_CELLS = 12


@dataclass(frozen=True)
class ExperimentSpec:
    generator: Mapping[str, Any]
    mode: str = "site"
    p: float = 0.5
    trials: int = 1
    seed: int = 0
    checks: tuple[str, ...] = ("site_duality",)
    exhaustive: bool = False
    rect: Any = None
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("site", "bond"):
            raise InputError(f"unknown mode {self.mode!r}")
        if not 0 <= self.p <= 1:
            raise InputError("p must lie in [0, 1]")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if self.workers < 1:
            raise InputError("workers must be at least 1")
        unknown = set(self.checks) - set(CROSSING_CHECKS) - set(COMPONENT_CHECKS)
        if unknown:
            raise InputError(f"unknown checks {sorted(unknown)}")
        if not self.checks:
            raise InputError("no checks requested")
        crossing = [c for c in self.checks if c in CROSSING_CHECKS]
        if crossing and len(crossing) != len(self.checks):
            raise InputError("crossing and component checks need separate experiments")
        for c in crossing:
            if CROSSING_CHECKS[c] != self.mode:
                raise InputError(f"{c} needs {CROSSING_CHECKS[c]} mode")
        if not crossing and self.mode != "site":
            raise InputError("component checks need site mode")
        kind = self.generator.get("kind")
        if kind not in ("square", "perturbed", "file"):
            raise InputError(f"unknown generator {kind!r}")
        if kind == "perturbed" and not 0 <= float(self.generator.get("delta", 0)) < 0.5:
            raise InputError("jitter must satisfy 0 <= delta < 0.5")

    @property
    def crossing(self) -> bool:
        return self.checks[0] in CROSSING_CHECKS

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ExperimentSpec":
        d = dict(d)
        if "checks" in d:
            d["checks"] = tuple(d["checks"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise InputError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"bad experiment spec: {exc}") from None


def build_lattice(gen: Mapping[str, Any]) -> PlanarLattice:
    kind = gen["kind"]
    if kind == "square":
        return gen_square_lattice(int(gen["n"]), int(gen["m"]))
    if kind == "perturbed":
        return gen_perturbed_lattice(int(gen["n"]), int(gen["m"]), float(gen["delta"]), int(gen.get("seed", 0)))
    from .io import read_lattice

    return read_lattice(gen["path"])[0]


def default_rect(lat: PlanarLattice, margin: float = 0.5) -> Rect:
    xs = [p[0] for p in lat.coords.values()]
    ys = [p[1] for p in lat.coords.values()]
    return Rect(min(xs) + margin, min(ys) + margin, max(xs) - margin, max(ys) - margin)


def _resolve_rect(lat: PlanarLattice, recipe) -> Rect:
    if recipe is None:
        return default_rect(lat)
    if isinstance(recipe, Mapping):
        return default_rect(lat, float(recipe.get("margin", 0.5)))
    return Rect(*map(float, recipe))


def central_cell(dec: CellDecomposition):
    xs = [p[0] for p in dec.lattice.coords.values()]
    ys = [p[1] for p in dec.lattice.coords.values()]
    mid = ((min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2)
    cid = dec.locate(mid)
    if cid is not None:
        return cid
    return min(dec.ids, key=lambda c: (abs(dec.by_id[c].site[0] - mid[0]) + abs(dec.by_id[c].site[1] - mid[1]), c))


def _jsonable(x):
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class TrialResult:
    events: dict[str, bool] = field(default_factory=dict)
    violations: dict[str, str] = field(default_factory=dict)
    skipped: set = field(default_factory=set)
    config: Any = None


class _Context:
    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.lattice = build_lattice(spec.generator)
        self.dec = decompose_cells(self.lattice)
        self.cover = None
        self.dual = None
        if spec.crossing:
            self.cover = build_rectangle_cover(self.dec, _resolve_rect(self.lattice, spec.rect))
            self.units = sorted(self.cover.interior_cells) if spec.mode == "site" else sorted(self.cover.interior_edges)
            self.target = self.cover
            self.origin = None
        else:
            self.units = self.dec.ids
            self.target = self.dec
            self.origin = central_cell(self.dec)
        if "bond_duality" in spec.checks or "star_surround" in spec.checks:
            self.dual = construct_dual(self.dec)
        if spec.exhaustive and len(self.units) > MAX_EXHAUSTIVE_UNITS:
            raise InputError(f"exhaustive run over {len(self.units)} units is too large")

    @property
    def n_trials(self) -> int:
        return 2 ** len(self.units) if self.spec.exhaustive else self.spec.trials

    def config(self, t: int):
        spec = self.spec
        if not spec.exhaustive:
            return sample_config(self.target, spec.mode, spec.p, spec.seed, t, self.origin)
        chosen = frozenset(u for k, u in enumerate(self.units) if t >> k & 1)
        if spec.mode == "bond":
            return BondConfig(chosen, frozenset(self.units) - chosen)
        if self.origin is not None:
            chosen = chosen | {self.origin}
        return SiteConfig(chosen, self.origin)


def _run_trial(ctx: _Context, t: int) -> TrialResult:
    cfg = ctx.config(t)
    res = TrialResult(config=cfg)
    checks = ctx.spec.checks
    if "site_duality" in checks:
        try:
            rep = check_site_duality(ctx.cover, cfg)
            res.events.update(rep.events)
        except DualityViolation as exc:
            res.events.update(exc.report.events)
            res.violations["site_duality"] = f"both or neither of {exc.pair}"
        return res
    if "bond_duality" in checks:
        try:
            rep = check_bond_duality(ctx.cover, ctx.dual, cfg)
            res.events.update(rep.events)
        except DualityViolation as exc:
            res.events.update(exc.report.events)
            res.violations["bond_duality"] = "both or neither of LR, TD_d"
        return res

    dec = ctx.dec
    star = component(dec, cfg, Adjacency.STAR)
    plus = component(dec, cfg, Adjacency.PLUS)

    def note(name: str, problems: list[str]):
        if problems:
            res.violations[name] = "; ".join(problems[:3])

    if "star_boundary" in checks or "euler" in checks:
        ob = with_euler(outermost_boundary_star(dec, star))
        if "star_boundary" in checks:
            probs = V.check_star_boundary(dec, cfg, star, ob)
            if len(star.cells) <= BRUTE_FORCE_CELLS and V.brute_force_outermost_edges(dec, star) != ob.edges:
                probs.append("boundary differs from the all-cycles oracle")
            note("star_boundary", probs)
        if "euler" in checks:
            note("euler", V.check_euler(ob, ob.euler_circuit))
    if "plus_boundary" in checks or "plus_surround" in checks:
        cyc = outermost_boundary_plus(dec, plus)
        if "plus_boundary" in checks:
            note("plus_boundary", V.check_plus_boundary(dec, cfg, plus, cyc))
        if "plus_surround" in checks:
            try:
                m_out = vacant_cell_cycle_around_plus(dec, cfg, plus)
                note("plus_surround", V.check_m_out(dec, cfg, plus, cyc, m_out))
            except MissingVacantNeighbor:
                res.skipped.add("plus_surround")
    if "star_surround" in checks:
        try:
            p_out = vacant_dual_cycle_around_star(dec, ctx.dual, star, cfg, exhaustive=ctx.spec.exhaustive)
            probs = [] if surrounds(dec, ctx.dual, cfg, star, p_out) else ["P_out does not surround the component"]
            if ctx.spec.exhaustive and V.brute_force_p_out(dec, ctx.dual, cfg, star) != p_out:
                probs.append("P_out differs from the brute-force maximal cycle")
            note("star_surround", probs)
        except HypothesisViolated:
            res.skipped.add("star_surround")
    return res


def wilson_interval(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(k, n).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass
class ExperimentReport:
    spec: dict
    trials: int
    checks: dict
    estimates: dict
    xor_sums: dict
    duality_failure: str | None = None
    timing: dict = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(c["violations"] for c in self.checks.values())

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.duality_failure is None

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("timing")
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)


def _chunks(n: int, k: int) -> list[range]:
    size = max(1, -(-n // (k * 4)))
    return [range(i, min(n, i + size)) for i in range(0, n, size)]


def run_experiment(spec: ExperimentSpec, progress: Callable[[int], None] | None = None) -> ExperimentReport:
    """Run every trial (or every configuration when exhaustive) and aggregate.

    Trials are independent: trial ``t`` draws from a generator seeded by
    ``(seed, t)``, and results are folded in trial order, so the report does
    not depend on the number of workers.
    """
    t0 = time.perf_counter()
    ctx = _Context(spec)
    preflight = None
    if ctx.dual is not None:
        report = verify_duality_properties(ctx.dec, ctx.dual)
        preflight = report.first_failure()
    t1 = time.perf_counter()
    n = ctx.n_trials

    def work(r: range) -> list[TrialResult]:
        return [_run_trial(ctx, t) for t in r]

    parts = _chunks(n, spec.workers)
    if spec.workers == 1:
        results = [x for r in parts for x in work(r)]
    else:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            results = [x for chunk in pool.map(work, parts) for x in chunk]
    t2 = time.perf_counter()

    checks: dict[str, dict] = {}
    for name in spec.checks:
        bad = [t for t, r in enumerate(results) if name in r.violations]
        skipped = sum(1 for r in results if name in r.skipped)
        entry = {"checked": n - skipped, "skipped": skipped, "violations": len(bad), "first_counterexample": None}
        if bad:
            t = bad[0]
            cfg = results[t].config
            units = cfg.occupied if isinstance(cfg, SiteConfig) else cfg.open_edges
            entry["first_counterexample"] = {
                "trial": t,
                "seed": [spec.seed, t],
                "config": _jsonable(units),
                "detail": results[t].violations[name],
            }
        checks[name] = entry
    names = sorted({k for r in results for k in r.events})
    estimates = {}
    for name in names:
        k = sum(1 for r in results if r.events.get(name))
        lo, hi = wilson_interval(k, n)
        estimates[name] = {"count": k, "frequency": k / n, "ci95": [lo, hi]}
    pairs = {"site_duality": (("LR+(O)", "TD*(V)"), ("LR*(O)", "TD+(V)")), "bond_duality": (("LR", "TD_d"),)}
    xor_sums = {}
    for name, group in pairs.items():
        if name in spec.checks:
            for a, b in group:
                xor_sums[f"{a}+{b}"] = (estimates[a]["count"] + estimates[b]["count"]) / n
    spec_d = _jsonable(asdict(spec))
    spec_d.pop("workers")
    return ExperimentReport(
        spec=spec_d,
        trials=n,
        checks=checks,
        estimates=estimates,
        xor_sums=xor_sums,
        duality_failure=preflight,
        timing={"setup_s": t1 - t0, "trials_s": t2 - t1, "workers": spec.workers},
    )
