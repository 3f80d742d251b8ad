"""Randomized hyperfinite sequences, equivalence relations from packings, random-rank partitions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .graph import Graph, ball
from .measure import Measure, sqrt_at_least
from .multipack import (
    Multipacking,
    build_partitions,
    iter_rank_maps,
    partition_from_map,
    partitions_to_multipacking,
    tightness_defect,
)
from .packing import Packing, covered_set, is_s_separated, join, max_tile_diameter
from .witness import WitnessFamily, truncate_support, uniform_ball_witness


class CfwScheduleError(RuntimeError):
    def __init__(self, level: int, message: str, values: dict):
        super().__init__(f"level {level}: {message} {values}")
        self.level = level
        self.values = values


@dataclass(frozen=True)
class LevelConstants:
    j: int
    eps: Fraction
    s: int
    k: int
    m: int
    M: int
    defect: Fraction


@dataclass
class CfwSchedule:
    """Per-level constants; ``D`` is measured on the sampled sequence."""

    levels: list[LevelConstants]
    D: list[int] = field(default_factory=lambda: [0])

    def next_s(self, j: int) -> int:
        """s_{j+1} = 2 s_j + 3 k_j (s_0 = k_0 = 1)."""
        s_j, k_j = (1, 1) if j == 0 else (self.levels[j - 1].s, self.levels[j - 1].k)
        return 2 * s_j + 3 * k_j

    def table(self) -> list[tuple[int, Fraction, int, int, int]]:
        rows = [(0, Fraction(1), 1, 1, 0)]
        for lv in self.levels:
            rows.append((lv.j, lv.eps, lv.s, lv.k, self.D[lv.j] if lv.j < len(self.D) else -1))
        return rows


@dataclass(frozen=True)
class PackingSequence:
    packings: tuple[Packing, ...]
    certificate: tuple[dict[int, int], ...]  # tile index at level j -> containing tile index at j+1
    indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class FiniteEquivalence:
    class_of: tuple[int, ...]
    diameter_bound: int

    @property
    def classes(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.class_of):
            out.setdefault(c, []).append(v)
        return list(out.values())

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


WitnessGenerator = Callable[[Graph, int, int, Fraction], WitnessFamily]


def edges_near(g: Graph, x: int, s: int) -> int:
    """Edges with an endpoint within distance s-1 of x."""
    near = ball(g, x, max(s - 1, 0))
    return len({(min(u, v), max(u, v)) for u in near for v in g.adjacency[u]})


def ball_witness_for_level(g: Graph, j: int, s: int, eps: Fraction) -> WitnessFamily:
    """Smallest uniform-ball witness whose union bound on per-vertex uncovering is <= eps.

    A vertex loses coverage after shrinking by s only if some edge touching
    B_{s-1}(x) is cut; each edge is cut with probability one minus the
    Jaccard index of the two balls.
    """
    if g.n == 0:
        return uniform_ball_witness(g, 0)
    reach = max(edges_near(g, x, s) for x in range(g.n))
    finite = g.distances[np.isfinite(g.distances)]
    diam = int(finite.max()) if finite.size else 0
    for r in range(0, diam + 1):
        balls = [ball(g, x, r) for x in range(g.n)]
        cut = max((1 - Fraction(len(balls[a] & balls[b]), len(balls[a] | balls[b])) for a, b in g.edges), default=Fraction(0))
        if cut * reach <= eps:
            return uniform_ball_witness(g, r)
    return uniform_ball_witness(g, diam)


@dataclass
class CfwConstruction:
    graph: Graph
    schedule: CfwSchedule
    level_packings: list[Multipacking]

    def sample(self, seed: int) -> PackingSequence:
        """Pick one packing per level uniformly and join along the way."""
        g = self.graph
        rng = np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, 0xCF3])
        current = Packing.empty()
        d_prev = 0
        seq, certs, idx = [], [], []
        for lv, mp in zip(self.schedule.levels, self.level_packings):
            i = int(rng.integers(mp.m))
            t = mp.packings[i]
            if not is_s_separated(g, current, 1) or lv.s < 3 * d_prev:
                raise CfwScheduleError(lv.j, "join hypotheses fail", {"s_j": lv.s, "D_prev": d_prev})
            nxt = join(g, current, t)
            if seq:
                certs.append(_containment(current, nxt))
            seq.append(nxt)
            idx.append(i)
            current = nxt
            d_prev = max_tile_diameter(g, nxt)
        return PackingSequence(tuple(seq), tuple(certs), tuple(idx))


def _containment(f: Packing, h: Packing) -> dict[int, int]:
    owner = h.tile_of()
    cert = {}
    for i, t in enumerate(f.tiles):
        targets = {owner.get(v) for v in t}
        if len(targets) != 1 or None in targets:
            raise CfwScheduleError(-1, "refinement fails", {"tile": t})
        cert[i] = targets.pop()
    return cert


def cfw_construct(
    g: Graph,
    J_max: int,
    seed: int,
    witness_for_level: WitnessGenerator = ball_witness_for_level,
    m_per_level: int = 16,
) -> CfwConstruction:
    """Level multipackings of s_j-separated packings with the exact s/k recursions."""
    sched = CfwSchedule([])
    mps = []
    for j in range(1, J_max + 1):
        eps = Fraction(1, 2**j)
        s = sched.next_s(j - 1)
        w = witness_for_level(g, j, s, eps)
        parts = build_partitions(g, w, m_per_level, seed=(int(seed) * 1_000_003 + j) & 0xFFFFFFFFFFFFFFFF)
        mp = partitions_to_multipacking(g, parts, s)
        k = max((max_tile_diameter(g, p) for p in mp.packings), default=0)
        M = (sched.levels[-1].M if sched.levels else 1) * mp.m
        sched.levels.append(LevelConstants(j, eps, s, k, mp.m, M, tightness_defect(mp) if g.n else Fraction(0)))
        mps.append(mp)
    return CfwConstruction(g, sched, mps)


def check_schedule(sched: CfwSchedule, seq: PackingSequence, g: Graph) -> list[tuple[str, bool, dict]]:
    """Exact recursion identities plus the diameter bounds on one sampled sequence."""
    rows = []
    D = [0] + [max_tile_diameter(g, p) for p in seq.packings]
    sched.D = D
    s_prev, k_prev = 1, 1
    M_prev = 1
    for lv in sched.levels:
        j = lv.j
        here = {"level": j}
        rows.append((f"eps_{j} = 2^-{j}", lv.eps == Fraction(1, 2**j), {**here, "eps": lv.eps}))
        rows.append((f"s_{j} = 2 s_{j-1} + 3 k_{j-1}", lv.s == 2 * s_prev + 3 * k_prev, {**here, "s": lv.s}))
        rows.append((f"M_{j} = M_{j-1} m_{j}", lv.M == M_prev * lv.m, {**here, "M": lv.M}))
        rows.append((f"D_{j} <= 2 D_{j-1} + k_{j}", D[j] <= 2 * D[j - 1] + lv.k, {**here, "D": D[j], "bound": 2 * D[j - 1] + lv.k}))
        s_next = 2 * lv.s + 3 * lv.k
        rows.append((f"3 D_{j} <= s_{j+1}", 3 * D[j] <= s_next, {**here, "3D": 3 * D[j], "s_next": s_next}))
        rows.append((f"F_{j} is 1-separated", is_s_separated(g, seq.packings[j - 1], 1), here))
        s_prev, k_prev, M_prev = lv.s, lv.k, lv.M
    for j, cert in enumerate(seq.certificate, start=1):
        ok = verify_refinement(seq.packings[j - 1], seq.packings[j], cert)
        rows.append((f"F_{j} refines into F_{j+1}", ok, {"level": j}))
    return rows


def verify_refinement(f: Packing, h: Packing, cert: dict[int, int]) -> bool:
    return len(cert) == len(f.tiles) and all(set(t) <= set(h.tiles[cert[i]]) for i, t in enumerate(f.tiles))


def cfw_sequence(
    g: Graph,
    J_max: int,
    seed: int,
    witness_for_level: WitnessGenerator = ball_witness_for_level,
    m_per_level: int = 16,
) -> tuple[PackingSequence, CfwSchedule]:
    cons = cfw_construct(g, J_max, seed, witness_for_level, m_per_level)
    seq = cons.sample(seed)
    failed = [(name, vals) for name, ok, vals in check_schedule(cons.schedule, seq, g) if not ok]
    if failed:
        name, vals = failed[0]
        raise CfwScheduleError(vals["level"], name, vals)
    return seq, cons.schedule


def coverage_under_measure(seq: PackingSequence, mu: Measure) -> list[Fraction]:
    return [mu.of(covered_set(p)) for p in seq.packings]


def coverage_meets_threshold(values: Sequence[Fraction], schedule: CfwSchedule, burn_in: int = 1) -> list[bool]:
    """mu([F_j]) >= 1 - sqrt(eps_j) for j >= burn_in (exact, by squaring)."""
    return [
        True if lv.j < burn_in else sqrt_at_least(v, lv.eps)
        for v, lv in zip(values, schedule.levels)
    ]


@dataclass(frozen=True)
class SplitEstimate:
    trials: int
    splits: int

    @property
    def frequency(self) -> float:
        return self.splits / self.trials if self.trials else 0.0

    @property
    def sigma(self) -> float:
        p = self.frequency
        return math.sqrt(p * (1 - p) / self.trials) if self.trials else 0.0

    @property
    def radius(self) -> float:
        """Three-sigma binomial radius."""
        return 3 * self.sigma


def same_tile(p: Packing, x: int, y: int) -> bool:
    owner = p.tile_of()
    return x in owner and owner.get(x) == owner.get(y)


def split_probability(level_sampler: Callable[[int], Packing], edge: tuple[int, int], trials: int, seed: int) -> SplitEstimate:
    """Monte Carlo probability that x, y are not in one tile (uncovered counts as split)."""
    x, y = edge
    splits = 0
    for t in range(trials):
        p = level_sampler(_trial_seed(seed, t))
        splits += not same_tile(p, x, y)
    return SplitEstimate(trials, splits)


def _trial_seed(seed: int, t: int) -> int:
    return int(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, t]).generate_state(1, np.uint64)[0])


def packings_to_equivalence(g: Graph, f: Packing) -> FiniteEquivalence:
    """Tiles become classes; uncovered vertices become singleton classes."""
    class_of = [-1] * g.n
    for i, t in enumerate(f.tiles):
        for v in t:
            class_of[v] = i
    nxt = len(f.tiles)
    for v in range(g.n):
        if class_of[v] < 0:
            class_of[v] = nxt
            nxt += 1
    return FiniteEquivalence(tuple(class_of), f.diameter_bound)


def witness_from_sequence(
    g: Graph, sampler: Callable[[int], FiniteEquivalence | Packing], trials: int, seed: int, n: int = 1
) -> WitnessFamily:
    """Empirical mean of 1{y in E(x)} / |E(x)| over sampled relations."""
    acc: list[dict[int, Fraction]] = [{} for _ in range(g.n)]
    bound = 0
    for t in range(trials):
        e = sampler(_trial_seed(seed, t))
        if isinstance(e, Packing):
            e = packings_to_equivalence(g, e)
        bound = max(bound, e.diameter_bound)
        for cls in e.classes:
            share = Fraction(1, len(cls))
            for x in cls:
                px = acc[x]
                for y in cls:
                    px[y] = px.get(y, Fraction(0)) + share
    dist = []
    for px in acc:
        total = sum(px.values(), Fraction(0))
        dist.append({y: v / total for y, v in px.items()})
    return WitnessFamily(n, tuple(dist), bound)


def truncated_supports(g: Graph, w: WitnessFamily, epsilon: Fraction) -> list[list[int]]:
    return [sorted(truncate_support(g, w, x, epsilon)) for x in range(g.n)]


def rank_partition_maps(g: Graph, w: WitnessFamily, epsilon: Fraction, trials: int, seed: int) -> Iterator[np.ndarray]:
    """Per trial, x -> argmax-rank vertex of supp'(x) under i.i.d. vertex ranks."""
    return iter_rank_maps(truncated_supports(g, w, epsilon), g.n, trials, seed)


def random_rank_partition(g: Graph, w: WitnessFamily, epsilon: Fraction, seed: int) -> Packing:
    phi = next(rank_partition_maps(g, w, epsilon, 1, seed))
    return partition_from_map(phi, 2 * w.support_radius)


def exact_supp_split(supports: Sequence[Sequence[int]], x: int, y: int) -> Fraction:
    a, b = set(supports[x]), set(supports[y])
    return 1 - Fraction(len(a & b), len(a | b))
