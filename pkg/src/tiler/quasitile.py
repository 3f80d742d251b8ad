"""Quasi-tiling by mediator-driven improvement, and the marker audit for near-complete packings."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .folner import packing_principle
from .graph import Graph, ball, boundary_size, distance_coloring, from_edge_list, k_boundary, set_diameter
from .multipack import Multipacking, build_partitions, tightness_defect
from .packing import Packing, covered_set, restrict_inside, validate_packing
from .witness import uniform_ball_witness

log = logging.getLogger(__name__)


class QuasiTileInputError(ValueError):
    pass


class CalibrationError(RuntimeError):
    def __init__(self, message: str, probe_log: list):
        super().__init__(message)
        self.probe_log = probe_log


class MediatorBudgetError(RuntimeError):
    def __init__(self, needed: int, budget: int, covered: int, total: int):
        super().__init__(
            f"{needed} mediators needed, budget {budget}; first {budget} cover {covered}/{total} candidates"
        )
        self.needed, self.budget, self.covered, self.total = needed, budget, covered, total


class ImprovementFailed(RuntimeError):
    def __init__(self, H: frozenset[int], achieved: Fraction, target: Fraction):
        super().__init__(f"repack of a {len(H)}-vertex mediator tile reached {achieved}, needs {target}")
        self.H, self.achieved, self.target = H, achieved, target


class AuditFailed(RuntimeError):
    def __init__(self, message: str, witness=None, audit=None):
        super().__init__(message)
        self.witness = witness
        self.audit = audit


class MarkerError(AuditFailed):
    pass


def _is_folner(g: Graph, s: Iterable[int], eps: Fraction, k: int) -> bool:
    s = frozenset(s)
    return bool(s) and boundary_size(g, s) < eps * len(s) and set_diameter(g, s) <= k


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class CalibrationRow:
    epsilon: Fraction
    k: int
    delta: Fraction
    failing: int
    probes: int


@dataclass
class QuasiTileConfig:
    epsilon0: Fraction
    rounds: int
    k0: int
    k1: int
    eps1: Fraction
    eps2: Fraction
    mediator_budget: int = 10_000
    delta1: Fraction = Fraction(1)
    m: int = 1
    n: int = 1
    mode: str = "verbatim"
    calibration: list[CalibrationRow] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.epsilon0 = Fraction(self.epsilon0)
        if not 0 < self.epsilon0 < 1:
            raise QuasiTileInputError("epsilon0 must lie in (0, 1)")
        if self.mode not in ("verbatim", "desk"):
            raise QuasiTileInputError(f"unknown constants mode {self.mode!r}")


def _probe_sets(g: Graph, centers: Sequence[int], budget: int) -> list[frozenset[int]]:
    seen, out = set(), []
    for c in centers:
        D = g.distances[c]
        ecc = int(D[np.isfinite(D)].max())
        for r in range(ecc + 1):
            b = ball(g, c, r)
            if b not in seen:
                seen.add(b)
                out.append(b)
    return out[:budget]


def _k_grid(g: Graph, probes: Sequence[frozenset[int]], eps: Fraction) -> list[int]:
    """Tile scales worth trying: multiples of the smallest Følner-ball diameter, plus the largest probe."""
    diams = sorted({int(set_diameter(g, p)) for p in probes if len(p) > 0})
    top = max(max(diams, default=1), 1)
    first = next((int(set_diameter(g, p)) for p in sorted(probes, key=len) if _is_folner(g, p, eps, top)), None)
    grid = {top}
    if first:
        grid.update(min(first * i, top) for i in (1, 2, 3, 4))
    return sorted(max(k, 1) for k in grid)


def calibrate(
    g: Graph, eps: Fraction, centers: Sequence[int] | None = None, budget: int = 200, policy: str = "first"
) -> tuple[Fraction, int, list[CalibrationRow]]:
    """Empirical (delta, k) for the packing principle at eps.

    For each tile scale k, delta(k) is the least Følner quotient among probe
    balls that the greedy packing fails to cover to 1 - eps; every probe
    below delta(k) is packed well. The scale with the largest delta wins,
    smallest k on ties.
    """
    eps = Fraction(eps)
    if centers is None:
        centers = sorted({0, g.n // 3, (2 * g.n) // 3})
    probes = _probe_sets(g, centers, budget)
    rows = []
    for k in _k_grid(g, probes, eps):
        failing = []
        for J in probes:
            _, cov = packing_principle(g, J, eps, k, policy)
            if cov < 1 - eps:
                failing.append(Fraction(boundary_size(g, J), len(J)))
        rows.append(CalibrationRow(eps, k, min(failing, default=Fraction(1)), len(failing), len(probes)))
    best = max(rows, key=lambda row: (row.delta, -row.k))
    if best.delta <= 0:
        raise CalibrationError(f"no tile scale packs the probes at epsilon {eps}", rows)
    return best.delta, best.k, rows


def derive_constants(
    g: Graph,
    epsilon0: Fraction,
    calibration_budget: int = 200,
    mode: str = "verbatim",
    centers: Sequence[int] | None = None,
    rounds: int | None = None,
    mediator_budget: int = 10_000,
) -> QuasiTileConfig:
    """Tile scales and tolerances for the improvement loop.

    ``mode="verbatim"`` applies the worst-case formulas as written; ``"desk"``
    uses the calibrated tolerances directly and leaves the coverage
    guarantee to the post-hoc probe check. ``m``, ``n`` and ``eps2`` are
    provisional until :func:`finalize_constants` sees the mediators.
    """
    epsilon0 = Fraction(epsilon0)
    if not 0 < epsilon0 < 1:
        raise QuasiTileInputError("epsilon0 must lie in (0, 1)")
    if g.n <= 1:
        return QuasiTileConfig(epsilon0, rounds or 1, 0, 0, epsilon0, epsilon0, mediator_budget, mode=mode)
    d = max(g.degree_bound, 1)
    delta0, k0, log0 = calibrate(g, epsilon0 / 3, centers, calibration_budget)
    eps1 = delta0 / d ** (k0 + 1) if mode == "verbatim" else delta0
    delta1, k1, log1 = calibrate(g, eps1 / 3, centers, calibration_budget)
    cfg = QuasiTileConfig(
        epsilon0, rounds or g.n, k0, k1, eps1, delta1, mediator_budget, delta1, mode=mode, calibration=log0 + log1
    )
    log.info("calibrated k0=%d eps1=%s k1=%d delta1=%s (%s)", k0, eps1, k1, delta1, mode)
    return cfg


def max_meeting(candidates: Sequence[frozenset[int]], n: int) -> int:
    """Largest number of candidates meeting a single candidate (itself included)."""
    if not candidates:
        return 0
    inc = np.zeros((len(candidates), n), dtype=np.float32)
    for i, c in enumerate(candidates):
        inc[i, list(c)] = 1
    best = 0
    for lo in range(0, len(candidates), 512):
        best = max(best, int(((inc[lo : lo + 512] @ inc.T) > 0).sum(axis=1).max()))
    return best


def finalize_constants(g: Graph, cfg: QuasiTileConfig, candidates: Sequence[frozenset[int]], mediators: "MediatorFamily") -> QuasiTileConfig:
    cfg.m = max(max_meeting(candidates, g.n), 1)
    cfg.n = max(len(mediators.mediators), 1)
    if cfg.mode == "verbatim":
        d = max(g.degree_bound, 1)
        cfg.eps2 = min(cfg.delta1, cfg.epsilon0 / (3 * cfg.m * cfg.n * d ** (2 * (cfg.k1 + 1))))
    else:
        cfg.eps2 = cfg.delta1
    return cfg


# ---------------------------------------------------------------- mediators


def candidate_family(g: Graph, eps: Fraction, k: int, per_center: int | None = None) -> list[frozenset[int]]:
    """Distinct balls that are eps-Følner with diameter <= k.

    ``per_center`` keeps only the smallest that many qualifying radii around
    each center; None keeps all.
    """
    out, seen = [], set()
    for c in range(g.n):
        taken = 0
        row = g.distances[c]
        for r in range(k + 1):
            if per_center is not None and taken >= per_center:
                break
            idx = np.flatnonzero(row <= r)
            mask = np.zeros(g.n, dtype=bool)
            mask[idx] = True
            rim = int((~mask[g.padded_adjacency[idx]]).any(axis=1).sum())
            if rim < eps * len(idx):
                # ball diameters grow with r, so the first too-wide qualifier ends this center
                if 2 * r > k and g.distances[np.ix_(idx, idx)].max() > k:
                    break
                b = frozenset(idx.tolist())
                taken += 1
                if b not in seen:
                    seen.add(b)
                    out.append(b)
    return out


@dataclass(frozen=True)
class MediatorFamily:
    mediators: tuple[Packing, ...]
    coverage_note: str
    candidates: int = 0


def _anchor(g: Graph, s: frozenset[int]) -> int:
    """Member of least eccentricity within s, smallest id on ties."""
    members = sorted(s)
    sub = g.distances[np.ix_(members, members)]
    return members[int(np.argmin(sub.max(axis=1)))]


def build_mediators(g: Graph, cfg: QuasiTileConfig, candidates: Sequence[Iterable[int]]) -> MediatorFamily:
    """One packing per (color, shape index): anchors of one color are > 2 k1 + 1 apart, so their sets are disjoint."""
    cands = [g.check_set(c) for c in candidates]
    if not cands:
        return MediatorFamily((), "empty candidate family", 0)
    for c in cands:
        if not c or set_diameter(g, c) > cfg.k1:
            raise QuasiTileInputError(f"candidate {sorted(c)[:8]}... is empty or wider than k1={cfg.k1}")
    coloring = distance_coloring(g, 2 * cfg.k1 + 1)
    by_anchor: dict[int, list[frozenset[int]]] = {}
    for c in sorted(set(cands), key=lambda s: (len(s), sorted(s))):
        by_anchor.setdefault(_anchor(g, c), []).append(c)
    groups: dict[tuple[int, int], list[frozenset[int]]] = {}
    for a, sets in by_anchor.items():
        for shape, c in enumerate(sets):
            groups.setdefault((coloring.color_of[a], shape), []).append(c)
    keys = sorted(groups)
    mediators = tuple(Packing.of(groups[key], cfg.k1) for key in keys)
    if len(mediators) > cfg.mediator_budget:
        covered = sum(len(groups[key]) for key in keys[: cfg.mediator_budget])
        raise MediatorBudgetError(len(mediators), cfg.mediator_budget, covered, len(set(cands)))
    return MediatorFamily(mediators, f"{len(set(cands))} candidate sets, {coloring.num_colors} colors", len(set(cands)))


# ---------------------------------------------------------------- improvement loop


def _inside_count(p: Packing, J: frozenset[int]) -> int:
    return len(restrict_inside(p, J))


def improve_tile(g: Graph, f: Packing, H: Iterable[int], cfg: QuasiTileConfig, policy: str = "first") -> tuple[Packing, bool]:
    """Repack H when its inside-coverage is below 1 - eps0/3; returns (packing, improved)."""
    H = frozenset(H)
    target = 1 - cfg.epsilon0 / 3
    if not H or Fraction(_inside_count(f, H), len(H)) >= target:
        return f, False
    keep, crossing = [], set()
    for t in f.tiles:
        st = set(t)
        if st <= H:
            continue
        keep.append(t)
        if st & H:
            crossing |= st
    Hp = H - crossing
    if not Hp:
        raise ImprovementFailed(H, Fraction(_inside_count(f, H), len(H)), target)
    repack, _ = packing_principle(g, Hp, cfg.epsilon0, max(cfg.k0, 1), policy)
    achieved = Fraction(len(covered_set(repack)), len(H))
    if achieved < target:
        raise ImprovementFailed(H, achieved, target)
    return Packing.of(keep + list(repack.tiles), max(f.diameter_bound, cfg.k0, 1)), True


@dataclass
class QuasiTileTrace:
    steps: list[tuple[int, int, int, int]] = field(default_factory=list)  # round, step, improvements, alterations
    rounds: list[dict] = field(default_factory=list)
    coverage: list[list[int]] = field(default_factory=list)  # per round, |J_T| for every probe
    failures: int = 0

    @property
    def ledger_ok(self) -> bool:
        return all(r["ledger_ok"] for r in self.rounds)

    @property
    def progress_ok(self) -> bool:
        return all(r["progress_ok"] for r in self.rounds)

    @property
    def steps_valid(self) -> bool:
        return all(r["steps_valid"] for r in self.rounds)


def _containing(index: list[set[int]], s: Iterable[int]) -> set[int]:
    """Ids of indexed sets containing every vertex of s."""
    it = iter(s)
    out = set(index[next(it)])
    for v in it:
        out &= index[v]
        if not out:
            break
    return out


def _vertex_index(sets: Sequence[frozenset[int]], n: int) -> list[set[int]]:
    index: list[set[int]] = [set() for _ in range(n)]
    for i, s in enumerate(sets):
        for v in s:
            index[v].add(i)
    return index


def quasi_tile(
    g: Graph,
    epsilon0: Fraction,
    seed_packing: Packing | None,
    cfg: QuasiTileConfig,
    mediators: MediatorFamily | None = None,
    probes: Sequence[frozenset[int]] | None = None,
    policy: str = "first",
    check: bool = True,
    candidates: Sequence[Iterable[int]] | None = None,
    on_failure: str = "raise",
) -> tuple[Packing, QuasiTileTrace]:
    """Rounds of mediator sweeps until a fixed point or ``cfg.rounds``.

    Probes default to the candidate family behind the mediators. Each round
    records the exact ledger ``gain >= h - n |k1-boundary|`` per probe and
    whether every probe met 1 - eps0 or gained a vertex. With
    ``on_failure="skip"`` a failed repack leaves the packing unchanged and is
    counted in the trace instead of raising.
    """
    epsilon0 = Fraction(epsilon0)
    if epsilon0 != cfg.epsilon0:
        raise QuasiTileInputError("epsilon0 disagrees with the config")
    trace = QuasiTileTrace()
    if g.n == 0:
        return Packing.empty(), trace
    f = seed_packing or Packing.empty()
    f = Packing.of(f.tiles, max(cfg.k0, 1))
    if mediators is None:
        cands = [g.check_set(c) for c in candidates] if candidates is not None else candidate_family(g, cfg.eps1, cfg.k1)
        mediators = build_mediators(g, cfg, cands)
        finalize_constants(g, cfg, cands, mediators)
        if probes is None:
            probes = cands
    probes = list(probes or [])
    pindex = _vertex_index(probes, g.n)
    n_med = len(mediators.mediators)
    rim = [len(k_boundary(g, J, cfg.k1)) if cfg.k1 >= 1 else 0 for J in probes]
    target = 1 - epsilon0
    for rnd in range(1, cfg.rounds + 1):
        before = [_inside_count(f, J) for J in probes]
        h = [0] * len(probes)
        total_improved = 0
        steps_valid = True
        for step, M in enumerate(mediators.mediators, start=1):
            old_tiles = set(f.tiles)
            improved = 0
            for H in M.tiles:
                try:
                    f, did = improve_tile(g, f, H, cfg, policy)
                except ImprovementFailed:
                    if on_failure != "skip":
                        raise
                    trace.failures += 1
                    did = False
                if did:
                    improved += 1
                    for i in _containing(pindex, H):
                        h[i] += 1
            changed = old_tiles ^ set(f.tiles)
            altered: set[int] = set()
            for t in changed:
                altered |= _containing(pindex, t)
            if check:
                steps_valid &= validate_packing(g, f) and all(
                    _is_folner(g, t, epsilon0, max(cfg.k0, 1)) for t in f.tiles
                )
            trace.steps.append((rnd, step, improved, len(altered)))
            total_improved += improved
        after = [_inside_count(f, J) for J in probes]
        ledger = all(a - b >= hh - n_med * r for a, b, hh, r in zip(after, before, h, rim))
        progress = all(a > b or Fraction(a, len(J)) >= target for a, b, J in zip(after, before, probes))
        trace.rounds.append(
            {"round": rnd, "improvements": total_improved, "ledger_ok": ledger, "progress_ok": progress, "steps_valid": steps_valid}
        )
        trace.coverage.append(after)
        if total_improved == 0:
            break
    return f, trace


def coverage_report(g: Graph, t: Packing, probes: Sequence[Iterable[int]]) -> list[Fraction | None]:
    """|T restricted inside J| / |J| per probe; None for an empty probe."""
    out = []
    for J in probes:
        J = g.check_set(J)
        if not J:
            log.info("skipping empty probe")
            out.append(None)
        else:
            out.append(Fraction(_inside_count(t, J), len(J)))
    return out


# ---------------------------------------------------------------- marker audit


@dataclass
class OwAudit:
    epsilon: Fraction
    eps_prime: Fraction
    k: int = 0
    delta: Fraction = Fraction(1)
    witness_radius: int = 0
    m: int = 0
    markers: list[tuple[int, int, int, bool]] = field(default_factory=list)  # tile, |T|, |A ∩ T|, ok
    per_tile: list[tuple[int, int, int, int, bool]] = field(default_factory=list)  # j, tile, |J \ J_F|, |A ∩ J|, ok
    hall_violations: list[tuple[int, int]] = field(default_factory=list)
    matched: int = 0
    integral_lhs: int = 0
    integral_rhs: int = 0
    marker_total: int = 0
    uncovered: int = 0
    vertex_count: int = 0
    carved: int = 0

    @property
    def uncovered_mass(self) -> Fraction:
        return Fraction(self.uncovered, self.vertex_count) if self.vertex_count else Fraction(0)

    @property
    def markers_ok(self) -> bool:
        return all(row[3] for row in self.markers)

    @property
    def per_tile_ok(self) -> bool:
        return all(row[4] for row in self.per_tile)

    @property
    def integral_ok(self) -> bool:
        return self.integral_lhs == self.integral_rhs <= self.m * self.marker_total

    @property
    def passes(self) -> bool:
        return (
            self.markers_ok
            and self.per_tile_ok
            and not self.hall_violations
            and self.integral_ok
            and self.uncovered_mass <= self.epsilon
        )


def _induced(g: Graph, vertices: Sequence[int]) -> Graph:
    pos = {v: i for i, v in enumerate(vertices)}
    pairs = [(pos[u], pos[v]) for u in vertices for v in g.adjacency[u] if u < v and v in pos]
    return from_edge_list(len(vertices), pairs, f"{g.name}-large")


def choose_markers(T: Packing, epsilon: Fraction, audit: OwAudit | None = None) -> set[int]:
    """floor(eps|T|/10) + 1 smallest-id vertices of each tile, which must stay below eps|T|/5."""
    A: set[int] = set()
    for i, t in enumerate(T.tiles):
        a = int(epsilon * len(t) / 10) + 1
        ok = epsilon * len(t) / 10 < a < epsilon * len(t) / 5
        if audit is not None:
            audit.markers.append((i, len(t), a, ok))
        if not ok:
            raise MarkerError(f"no integer strictly between {epsilon}|T|/10 and {epsilon}|T|/5 for |T|={len(t)}", t, audit)
        A.update(sorted(t)[:a])
    return A


def ow_packing(
    g: Graph,
    epsilon: Fraction,
    seed: int = 0,
    samples: int = 8,
    mode: str = "verbatim",
    calibration_budget: int = 200,
) -> tuple[Packing, OwAudit]:
    """Near-complete packing whose uncovered uniform mass is audited against epsilon.

    Components with at most 10/epsilon vertices become tiles outright. On the
    rest: a quasi-tiling at eps' = epsilon/11, a tight multipacking of
    delta-Følner tiles from random-rank partitions, markers inside every
    quasi-tile, and the per-tile injections into the markers.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise QuasiTileInputError("epsilon must lie in (0, 1)")
    eps_p = epsilon / 11
    assert eps_p < epsilon / 10 * (1 - eps_p)
    audit = OwAudit(epsilon, eps_p, vertex_count=g.n)
    comp = g.components
    members: dict[int, list[int]] = {}
    for v in range(g.n):
        members.setdefault(comp[v], []).append(v)
    small = [c for c in members.values() if len(c) <= 10 / epsilon]
    large = sorted(v for c in members.values() if len(c) > 10 / epsilon for v in c)
    audit.carved = len(small)
    tiles: list[list[int]] = [list(c) for c in small]
    if large:
        h = _induced(g, large)
        cfg = derive_constants(h, eps_p, calibration_budget, mode)
        T, _ = quasi_tile(h, eps_p, None, cfg)
        audit.k = max(cfg.k0, 1)
        _audit_large(h, T, epsilon, seed, samples, audit)
        tiles += [[large[v] for v in t] for t in T.tiles]
    bound = max((int(set_diameter(g, t)) for t in tiles), default=0)
    packing = Packing.of(tiles, bound)
    audit.uncovered = g.n - len(covered_set(packing))
    if audit.uncovered_mass > epsilon:
        raise AuditFailed(f"uncovered mass {audit.uncovered_mass} exceeds {epsilon}", None, audit)
    return packing, audit


def _audit_large(h: Graph, T: Packing, epsilon: Fraction, seed: int, samples: int, audit: OwAudit) -> None:
    eps_p = audit.eps_prime
    # probe threshold: least quotient among balls the quasi-tiling leaves under-covered
    probes = _probe_sets(h, sorted({0, h.n // 3, (2 * h.n) // 3}), 10**6)
    bad = [Fraction(boundary_size(h, J), len(J)) for J in probes if Fraction(_inside_count(T, J), len(J)) <= 1 - eps_p]
    audit.delta = min(bad, default=Fraction(1))
    mp = _folner_multipacking(h, audit.delta, epsilon, seed, samples, audit)
    audit.m = mp.m
    A = choose_markers(T, epsilon, audit)
    audit.marker_total = len(A)
    inF = covered_set(T)
    hits = [0] * h.n
    for j, p in enumerate(mp.packings):
        for i, J in enumerate(p.tiles):
            Js = frozenset(J)
            U = sorted(Js - restrict_inside(T, Js))
            marks = sorted(A & Js)
            ok = len(U) < len(marks)
            audit.per_tile.append((j, i, len(U), len(marks), ok))
            if len(U) > len(marks):
                audit.hall_violations.append((j, i))
                continue
            # the bipartite graph inside J is complete, so pairing in order is a maximum matching
            for y, z in zip(U, marks):
                if y not in inF:
                    hits[z] += 1
            audit.matched += len(U)
    counts = mp.coverage_counts()
    audit.integral_lhs = sum(counts[y] for y in range(h.n) if y not in inF)
    audit.integral_rhs = sum(hits[z] for z in A)
    failed = [row for row in audit.per_tile if not row[4]]
    if failed:
        j, i = failed[0][:2]
        raise AuditFailed(f"tile {i} of packing {j} has |J minus J_F| >= |A ∩ J|", mp.packings[j].tiles[i], audit)


def _folner_multipacking(h: Graph, delta: Fraction, epsilon: Fraction, seed: int, samples: int, audit: OwAudit) -> Multipacking:
    """Smallest uniform-ball witness radius whose delta-Følner partition tiles are epsilon-tight."""
    finite = h.distances[np.isfinite(h.distances)]
    for r in range(int(finite.max()) + 1):
        parts = build_partitions(h, uniform_ball_witness(h, r), samples, seed)
        kept = tuple(
            Packing.of([t for t in p.tiles if boundary_size(h, frozenset(t)) < delta * len(t)], p.diameter_bound) for p in parts
        )
        mp = Multipacking(kept, h.n)
        if tightness_defect(mp) < epsilon:
            audit.witness_radius = r
            return mp
    raise AuditFailed(f"no ball witness yields an {epsilon}-tight {delta}-Følner multipacking", None, audit)
