"""Run configs, pipelines and report emission.

A pipeline turns a :class:`RunConfig` into a :class:`RunReport`: rows of
exact values, each asserted row carrying the inequality it checks. Reports
are written as ``report.json`` and ``report.csv`` (byte-identical for a
fixed config); wall-clock time goes to the ``timing.json`` sidecar.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np
import yaml
from scipy.stats import chisquare, norm

from . import graph, multipack, oracles, packing, quasitile, randseq, witness
from .graph import Graph
from .measure import Measure, sqrt_at_least
from .packing import Packing

log = logging.getLogger(__name__)

PIPELINES = ("validate-witness", "multipack", "quasitile", "ow-audit", "cfw", "rank-partition", "oracle-suite")
RANDOMIZED = {"multipack", "ow-audit", "cfw", "rank-partition"}
REQUIRED = {
    "validate-witness": ("r",),
    "multipack": ("n",),
    "quasitile": ("epsilon0",),
    "ow-audit": ("epsilon",),
    "cfw": ("J_max",),
    "rank-partition": ("r", "epsilon"),
    "oracle-suite": (),
}


class ConfigError(ValueError):
    pass


class PipelineError(RuntimeError):
    def __init__(self, module: str, exc: BaseException):
        super().__init__(f"{module}: {type(exc).__name__}: {exc}")
        self.module = module
        self.original = exc


# ---------------------------------------------------------------- config


@dataclass
class RunConfig:
    pipeline: str
    graph: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    seed: int | None = None
    out: str | None = None

    def validate(self) -> "RunConfig":
        if self.pipeline not in PIPELINES:
            raise ConfigError(f"unknown pipeline {self.pipeline!r}; expected one of {', '.join(PIPELINES)}")
        missing = [k for k in REQUIRED[self.pipeline] if k not in self.params]
        if missing:
            raise ConfigError(f"{self.pipeline} needs params: {', '.join(missing)}")
        if self.pipeline in RANDOMIZED and self.seed is None:
            raise ConfigError(f"{self.pipeline} is randomized and needs a seed")
        if self.seed is not None and not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.pipeline != "oracle-suite" and not self.graph:
            raise ConfigError("graph spec is required")
        return self

    def echo(self) -> dict:
        return {"pipeline": self.pipeline, "graph": self.graph, "params": self.params, "seed": self.seed, "out": self.out}


def config_from_dict(raw: dict, **overrides: Any) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(raw) - {"pipeline", "graph", "params", "seed", "out"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(raw)
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "pipeline" and raw.get("pipeline") not in (None, value):
            raise ConfigError(f"config names pipeline {raw['pipeline']!r} but {value!r} was requested")
        merged[key] = value
    if "pipeline" not in merged:
        raise ConfigError("no pipeline given")
    seed = merged.get("seed")
    cfg = RunConfig(
        str(merged["pipeline"]),
        dict(merged.get("graph") or {}),
        dict(merged.get("params") or {}),
        None if seed is None else int(seed),
        None if merged.get("out") is None else str(merged["out"]),
    )
    return cfg.validate()


def load_config(path: str | Path | None, **overrides: Any) -> RunConfig:
    raw: dict = {}
    if path is not None:
        try:
            raw = yaml.safe_load(Path(path).read_text()) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
    return config_from_dict(raw, **overrides)


def _frac(value: Any, name: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"{name} must be a rational like 1/2, got {value!r}") from e


# ---------------------------------------------------------------- report


@dataclass(frozen=True)
class Row:
    metric: str
    value: Any
    passed: bool | None = None
    anchor: str = ""

    def serialize(self) -> dict:
        v = self.value
        if isinstance(v, bool) or v is None:
            exact, dec = (str(v).lower() if v is not None else ""), ""
        elif isinstance(v, (int, np.integer)):
            exact, dec = f"{int(v)}/1", f"{int(v)}"
        elif isinstance(v, Fraction):
            exact, dec = f"{v.numerator}/{v.denominator}", f"{float(v):.12g}"
        elif isinstance(v, (float, np.floating)):
            exact, dec = "", f"{float(v):.12g}"
        else:
            exact, dec = str(v), ""
        return {"metric": self.metric, "exact": exact, "decimal": dec, "pass": self.passed, "anchor": self.anchor}


@dataclass
class RunReport:
    config: dict
    rows: list[Row] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)  # file name -> contents
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed is not False for r in self.rows)

    def add(self, metric: str, value: Any, passed: bool | None = None, anchor: str = "") -> None:
        if passed is not None and not anchor:
            raise ValueError(f"asserted row {metric!r} needs an anchor")
        self.rows.append(Row(metric, value, None if passed is None else bool(passed), anchor))

    def info(self, metric: str, value: Any) -> None:
        self.rows.append(Row(metric, value))

    def to_json(self) -> str:
        body = {"config": self.config, "passed": self.passed, "rows": [r.serialize() for r in self.rows], "artifacts": sorted(self.artifacts)}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        return _csv(["metric", "exact", "decimal", "pass", "anchor"], [list(r.serialize().values()) for r in self.rows])

    def write(self, out: str | Path) -> Path:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json())
        (out / "report.csv").write_text(self.to_csv())
        for name, text in self.artifacts.items():
            (out / name).write_text(text)
        (out / "timing.json").write_text(json.dumps({"wall_clock_seconds": round(self.seconds, 3)}) + "\n")
        return out


def _csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (str(v).lower() if isinstance(v, bool) else v) for v in row])
    return buf.getvalue()


def _dec(v: Fraction | float) -> str:
    return f"{float(v):.12g}"


# ---------------------------------------------------------------- pipelines


def _p_validate_witness(g: Graph, cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    level = int(p.get("n", 1))
    if "witness_file" in p:
        w = witness.read_witness(p["witness_file"], g.n)
    else:
        w = witness.uniform_ball_witness(g, int(p["r"]), level)
    vr = witness.validate_witness(g, w)
    rep.add("max_neighbor_l1", vr.max_neighbor_l1, vr.max_neighbor_l1 < Fraction(1, w.n), f"max over edges of ||p(x) - p(y)||_1 < 1/{w.n}")
    if "expect_l1" in p:
        want = _frac(p["expect_l1"], "expect_l1")
        rep.add("max_neighbor_l1 matches expected", want, vr.max_neighbor_l1 == want, "exact analytic value")
    rep.add("support_radius", vr.max_support_radius, vr.max_support_radius <= w.support_radius, f"supp p(x) inside B(x, {w.support_radius})")
    rep.add("distributions sum to 1", vr.sums_ok, vr.sums_ok, "sum_y p(x, y) = 1 for every x")
    if vr.worst_edge is not None:
        rep.info("worst_edge", f"{vr.worst_edge[0]}-{vr.worst_edge[1]}")
    if p.get("write_witness", True):
        rep.artifacts["witness.txt"] = witness.format_witness(w)


def smallest_valid_radius(g: Graph, level: int) -> int:
    """Least r whose uniform-ball witness passes validation at quality ``level``."""
    finite = g.distances[np.isfinite(g.distances)]
    diam = int(finite.max()) if finite.size else 0
    for r in range(diam + 1):
        if witness.validate_witness(g, witness.uniform_ball_witness(g, r, level)).passes:
            return r
    raise ConfigError(f"no ball radius up to the diameter {diam} reaches quality {level}")


def _p_multipack(g: Graph, cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    level = int(p["n"])
    r = int(p["r"]) if "r" in p else smallest_valid_radius(g, level)
    samples = int(p.get("samples", 10_000))
    s = int(p.get("s", 1))
    keep = int(p.get("m", 16))
    w = witness.uniform_ball_witness(g, r, level)
    vr = witness.validate_witness(g, w)
    rep.info("ball_radius", r)
    rep.add("witness passes at level n", vr.max_neighbor_l1, vr.passes, f"neighbor L1 < 1/{level}")
    M = w.denominator
    rep.info("M", M)
    rep.info("samples", samples)
    edges = g.edges
    xs = np.array([e[0] for e in edges], dtype=np.int64)
    ys = np.array([e[1] for e in edges], dtype=np.int64)
    split = np.zeros(len(edges), dtype=np.int64)
    on_boundary = np.zeros(g.n, dtype=np.int64)
    nbr = g.padded_adjacency
    kept: list[Packing] = []
    for i, phi in enumerate(multipack.assignments(g, w, samples, cfg.seed, M)):
        split += phi[xs] != phi[ys]
        on_boundary += (phi[nbr] != phi[:, None]).any(axis=1)
        if i < keep:
            kept.append(multipack.partition_from_map(phi, 2 * w.support_radius))
    bound = Fraction(2, 2 + level)
    rows, within, worst, exact_ok, zmax = [], 0, 0.0, True, 0.0
    for e, (x, y) in enumerate(edges):
        exact = multipack.exact_split_probability(w, x, y, M)
        freq = split[e] / samples
        sigma = math.sqrt(float(exact) * float(1 - exact) / samples)
        ok = abs(freq - float(exact)) <= 3 * sigma
        if sigma > 0:
            zmax = max(zmax, abs(freq - float(exact)) / sigma)
        within += ok
        worst = max(worst, freq)
        exact_ok &= exact <= bound
        rows.append([x, y, str(exact), _dec(exact), f"{freq:.6f}", f"{sigma:.6f}", ok])
    rep.add("edges with split frequency within 3 sigma of exact", Fraction(within, max(len(edges), 1)), within == len(edges), "|freq - (1 - |Q(x)∩Q(y)|/|Q(x)∪Q(y)|)| <= 3 sigma")
    # one 3-sigma test per edge; the family-wise equivalent is reported alongside
    rep.info("max |z| over edges", zmax)
    rep.info("family-wise 3-sigma z threshold", float(norm.isf(2 * norm.sf(3) / max(len(edges), 1) / 2)))
    rep.add("max exact split probability", max((multipack.exact_split_probability(w, x, y, M) for x, y in edges), default=Fraction(0)), exact_ok, f"1 - Jaccard <= 2/(2+n) = {bound}")
    rep.add("max split frequency", worst, worst <= bound, f"split frequency <= 2/(2+n) = {bound}")
    rep.artifacts["split.csv"] = _csv(["x", "y", "exact", "exact_decimal", "frequency", "sigma", "within_3sigma"], rows)
    if "epsilon" in p:
        eps = _frac(p["epsilon"], "epsilon")
        d = g.degree_bound
        rep.add("epsilon exceeds 2d/(n+2)", eps, eps > Fraction(2 * d, level + 2), f"eps > 2d/(n+2) = {Fraction(2 * d, level + 2)}")
        frac = on_boundary / samples
        slack = 3 * math.sqrt(float(eps) * float(1 - eps) / samples)
        worst_b = float(frac.max()) if g.n else 0.0
        rep.add("max per-vertex boundary frequency", worst_b, worst_b <= float(eps) + slack, f"P(x on its tile boundary) <= eps + 3 sigma, sigma = {slack / 3:.6f}")
        rep.artifacts["boundary.csv"] = _csv(["vertex", "frequency"], [[x, f"{frac[x]:.6f}"] for x in range(g.n)])
    if kept:
        mp = multipack.partitions_to_multipacking(g, kept, s)
        defect = multipack.tightness_defect(mp)
        rep.info(f"defect after shrinking {len(kept)} partitions by {s}", defect)
        tiles_ok = all(packing.max_tile_diameter(g, q) <= 2 * w.support_radius for q in kept)
        rep.add("partition tile diameters", 2 * w.support_radius, tiles_ok, "every tile has diameter <= 2R")
        rep.add("shrunk packings are s-separated", s, all(packing.is_s_separated(g, q, s) for q in mp.packings), "distinct tiles at distance > s")
        rep.artifacts["multipacking.txt"] = multipack.format_multipacking(mp)
        rep.artifacts["coverage.csv"] = _csv(["vertex", "covered_count", "m"], [list(t) for t in multipack.coverage_rows(mp)])


def _p_quasitile(g: Graph, cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    eps0 = _frac(p["epsilon0"], "epsilon0")
    if g.n == 0:
        rep.add("tiles", 0, True, "empty graph gives the empty packing")
        rep.artifacts["packing.txt"] = packing.format_packing(Packing.empty())
        return
    qc = quasitile.derive_constants(
        g, eps0, int(p.get("calibration_budget", 200)), p.get("mode", "verbatim"), rounds=p.get("rounds"),
        mediator_budget=int(p.get("mediator_budget", 10_000)),
    )
    if "k0" in p:
        qc.k0 = int(p["k0"])
    cands = quasitile.candidate_family(g, qc.eps1, qc.k1, p.get("per_center"))
    meds = quasitile.build_mediators(g, qc, cands)
    quasitile.finalize_constants(g, qc, cands, meds)
    for key in ("k0", "k1", "eps1", "eps2", "delta1", "m", "n"):
        rep.info(key, getattr(qc, key))
    rep.info("mode", qc.mode)
    rep.info("candidates", len(cands))
    rep.info("mediators", len(meds.mediators))
    T, trace = quasitile.quasi_tile(g, eps0, None, qc, meds, cands, p.get("policy", "first"), True, on_failure=p.get("on_failure", "raise"))
    cover = quasitile.coverage_report(g, T, cands)
    worst = min((c for c in cover if c is not None), default=Fraction(1))
    rep.add("min probe coverage", worst, worst >= 1 - eps0, f"|J_T|/|J| >= 1 - eps0 = {1 - eps0} for every probe")
    k = max(qc.k0, 1)
    folner_ok = all(quasitile._is_folner(g, t, eps0, k) for t in T.tiles)
    rep.add("tiles are (eps0, k0)-Følner", len(T.tiles), folner_ok, f"|boundary T| < eps0 |T| and diam T <= {k}")
    rep.add("tiles are disjoint", len(T.tiles), packing.validate_packing(g, T), "pairwise disjoint tiles")
    rep.add("ledger holds every round", len(trace.rounds), trace.ledger_ok, "gain(J) >= h(J) - n |k1-boundary of J|")
    rep.add("every step keeps a valid packing", len(trace.steps), trace.steps_valid, "after each mediator the tiles stay disjoint and Følner")
    rep.info("progress every round", trace.progress_ok)
    rep.info("failed repacks", trace.failures)
    rep.artifacts["packing.txt"] = packing.format_packing(T)
    rep.artifacts["calibration.csv"] = _csv(
        ["epsilon", "k", "delta", "delta_decimal", "failing", "probes"],
        [[str(c.epsilon), c.k, str(c.delta), _dec(c.delta), c.failing, c.probes] for c in qc.calibration],
    )
    rep.artifacts["trace.csv"] = _csv(["round", "step", "improvements", "alterations"], [list(s) for s in trace.steps])
    rep.artifacts["probe_coverage.csv"] = _csv(
        ["probe", "size", "covered_inside", "fraction"],
        [[i, len(J), len(packing.restrict_inside(T, J)), _dec(c)] for i, (J, c) in enumerate(zip(cands, cover))],
    )


def _p_ow_audit(g: Graph, cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    eps = _frac(p["epsilon"], "epsilon")
    try:
        P, a = quasitile.ow_packing(g, eps, cfg.seed, int(p.get("samples", 8)), p.get("mode", "verbatim"), int(p.get("calibration_budget", 200)))
    except quasitile.AuditFailed as e:
        rep.add("audit", str(e), False, "audit completes")
        if e.audit is None:
            return
        a, P = e.audit, None
    for key in ("eps_prime", "k", "delta", "witness_radius", "m", "marker_total", "matched", "carved"):
        rep.info(key, getattr(a, key))
    rep.add("eps' below eps/10 (1 - eps')", a.eps_prime, a.eps_prime < a.epsilon / 10 * (1 - a.eps_prime), "eps' < (eps/10)(1 - eps')")
    rep.add("markers per tile", len(a.markers), a.markers_ok, "eps|T|/10 < |A ∩ T| < eps|T|/5")
    rep.add("per-tile injections", len(a.per_tile), a.per_tile_ok, "|J \\ J_F| < |A ∩ J|")
    rep.add("matching exists for every packing", len(a.hall_violations), not a.hall_violations, "Hall's condition for J \\ J_F into A ∩ J")
    rep.add("integral identity", Fraction(a.integral_lhs, max(a.integral_rhs, 1)), a.integral_ok, "sum of uncovered coverage counts <= sum of marker hits")
    rep.add("uncovered uniform mass", a.uncovered_mass, a.uncovered_mass <= eps, f"mu(V \\ [P]) <= eps = {eps}")
    rep.artifacts["markers.csv"] = _csv(["tile", "size", "markers", "ok"], [list(m) for m in a.markers])
    rep.artifacts["per_tile.csv"] = _csv(["packing", "tile", "uncovered_inside", "markers_inside", "ok"], [list(m) for m in a.per_tile])
    if P is not None:
        rep.artifacts["packing.txt"] = packing.format_packing(P)


def _labels(g: Graph, f: Packing) -> np.ndarray:
    """Tile index per vertex; uncovered vertices get distinct negative labels."""
    lab = -1 - np.arange(g.n, dtype=np.int64)
    for i, t in enumerate(f.tiles):
        lab[list(t)] = i
    return lab


def _p_cfw(g: Graph, cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    J = int(p["J_max"])
    burn_in = int(p.get("burn_in", 1))
    trials = int(p.get("split_trials", 0))
    cons = randseq.cfw_construct(g, J, cfg.seed, m_per_level=int(p.get("m_per_level", 16)))
    seq = cons.sample(cfg.seed)
    sched = cons.schedule
    for name, ok, vals in randseq.check_schedule(sched, seq, g):
        shown = next((v for k, v in vals.items() if k != "level"), ok)
        rep.add(name, shown, ok, name)
    if not sched.levels:
        rep.add("levels", 0, True, "J_max = 0 gives the empty sequence")
    cov = randseq.coverage_under_measure(seq, Measure.uniform(g.n)) if g.n else []
    rep.info("burn_in", burn_in)
    for lv, c, ok in zip(sched.levels, cov, randseq.coverage_meets_threshold(cov, sched, burn_in)):
        if lv.j >= burn_in:
            rep.add(f"coverage F_{lv.j}", c, sqrt_at_least(c, lv.eps), f"mu([F_{lv.j}]) >= 1 - sqrt(2^-{lv.j})")
        else:
            rep.info(f"coverage F_{lv.j}", c)
    rep.artifacts["schedule.csv"] = _csv(
        ["j", "eps", "s", "k", "D", "m", "M", "defect"],
        [[lv.j, str(lv.eps), lv.s, lv.k, sched.D[lv.j], lv.m, lv.M, str(lv.defect)] for lv in sched.levels],
    )
    rep.artifacts["coverage.csv"] = _csv(["j", "coverage", "decimal"], [[lv.j, str(c), _dec(c)] for lv, c in zip(sched.levels, cov)])
    rep.artifacts["sequence.txt"] = "---\n".join(packing.format_packing(f) for f in seq.packings)
    if trials and sched.levels and g.edges:
        xs = np.array([e[0] for e in g.edges])
        ys = np.array([e[1] for e in g.edges])
        splits = np.zeros((len(sched.levels), len(xs)), dtype=np.int64)
        for t in range(trials):
            s = cons.sample(randseq._trial_seed(cfg.seed, t))
            for j, f in enumerate(s.packings):
                lab = _labels(g, f)
                splits[j] += lab[xs] != lab[ys]
        rep.info("split_trials", trials)
        rows = []
        for j, lv in enumerate(sched.levels):
            freq = splits[j] / trials
            target = min(2 * lv.eps, Fraction(1))
            sigma = math.sqrt(float(target) * float(1 - target) / trials)
            worst = float(freq.max())
            rep.add(f"max split frequency level {lv.j}", worst, worst <= float(2 * lv.eps) + 3 * sigma, f"split frequency <= 2 eps_j + 3 sigma, sigma = {sigma:.6f}")
            rows += [[lv.j, int(x), int(y), f"{fr:.6f}", f"{sigma:.6f}"] for x, y, fr in zip(xs, ys, freq)]
        rep.artifacts["split.csv"] = _csv(["j", "x", "y", "frequency", "sigma"], rows)


def _p_rank_partition(g: Graph, cfg: RunConfig, rep: RunReport) -> None:
    p = cfg.params
    eps = _frac(p["epsilon"], "epsilon")
    r = int(p["r"])
    trials = int(p.get("trials", 10_000))
    alpha = float(_frac(p.get("alpha", "1/100"), "alpha"))
    w = witness.uniform_ball_witness(g, r)
    supports = randseq.truncated_supports(g, w, eps)
    maps = np.array(list(randseq.rank_partition_maps(g, w, eps, trials, cfg.seed)), dtype=np.int64).reshape(trials, g.n)
    rep.info("trials", trials)
    pvals, rows = [], []
    for x in range(g.n):
        sup = supports[x]
        counts = np.array([(maps[:, x] == y).sum() for y in sup])
        rows += [[x, y, int(c)] for y, c in zip(sup, counts)]
        if counts.sum() != trials:
            pvals.append(0.0)
        elif len(sup) > 1:
            pvals.append(float(chisquare(counts).pvalue))
    corrected = alpha / max(len(pvals), 1)
    least = min(pvals, default=1.0)
    rep.add("every image lies in supp'(x)", trials, all(s == trials for s in [sum(c for xx, _, c in rows if xx == x) for x in range(g.n)]), "phi(x) in supp'(x)")
    rep.add("least chi-square p-value", least, least >= corrected, f"uniform on supp'(x): p >= {alpha}/{len(pvals)} (Bonferroni over vertices)")
    rep.info("vertices with uncorrected p < alpha", sum(v < alpha for v in pvals))
    srows, worst = [], 0.0
    slack = 3 * math.sqrt(float(eps) * float(1 - eps) / trials)
    within = 0
    for x, y in g.edges:
        exact = randseq.exact_supp_split(supports, x, y)
        freq = float(np.mean(maps[:, x] != maps[:, y]))
        sigma = math.sqrt(float(exact) * float(1 - exact) / trials)
        within += abs(freq - float(exact)) <= 3 * sigma
        worst = max(worst, freq)
        srows.append([x, y, str(exact), f"{freq:.6f}", f"{sigma:.6f}"])
    rep.add("max split frequency", worst, worst <= float(eps) + slack, f"split frequency <= eps + 3 sigma, sigma = {slack / 3:.6f}")
    rep.info("edges within 3 sigma of exact", Fraction(within, max(len(g.edges), 1)))
    rep.artifacts["image_counts.csv"] = _csv(["x", "y", "count"], rows)
    rep.artifacts["split.csv"] = _csv(["x", "y", "exact", "frequency", "sigma"], srows)


def _p_oracle_suite(g: Graph | None, cfg: RunConfig, rep: RunReport) -> None:
    select = cfg.params.get("select")
    results = oracles.run_oracles(None if select is None else list(select))
    for res in results:
        rep.add(res.name, res.actual, res.match, f"expected {res.expected}")
    rep.info("oracles", len(results))
    rep.artifacts["oracles.csv"] = _csv(["name", "expected", "actual", "match"], [[r.name, r.expected, r.actual, r.match] for r in results])


_RUNNERS: dict[str, tuple[str, Callable]] = {
    "validate-witness": ("witness", _p_validate_witness),
    "multipack": ("multipack", _p_multipack),
    "quasitile": ("quasitile", _p_quasitile),
    "ow-audit": ("quasitile", _p_ow_audit),
    "cfw": ("randseq", _p_cfw),
    "rank-partition": ("randseq", _p_rank_partition),
    "oracle-suite": ("oracles", _p_oracle_suite),
}


def run_pipeline(config: RunConfig | dict) -> RunReport:
    """Execute a pipeline in memory; nothing is written."""
    cfg = config if isinstance(config, RunConfig) else config_from_dict(config)
    cfg.validate()
    rep = RunReport(cfg.echo())
    start = time.perf_counter()
    try:
        g = graph.generate(cfg.graph) if cfg.graph else None
    except (graph.GraphInputError, KeyError, TypeError, ValueError, OSError) as e:
        raise PipelineError("graph", e) from e
    module, fn = _RUNNERS[cfg.pipeline]
    try:
        fn(g, cfg, rep)
    except ConfigError:
        raise
    except Exception as e:
        raise PipelineError(module, e) from e
    rep.seconds = time.perf_counter() - start
    return rep


def run(config: RunConfig | dict, out: str | Path | None = None) -> RunReport:
    """Execute a pipeline and write report, artifacts and timing sidecar."""
    cfg = config if isinstance(config, RunConfig) else config_from_dict(config)
    rep = run_pipeline(cfg)
    rep.write(out or cfg.out or Path("runs") / cfg.pipeline)
    return rep
