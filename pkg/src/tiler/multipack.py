"""Tight multipackings: random-rank partitions from a witness, shrink, and the reverse witness.

Lifted points ``(u, j)`` with ``1 <= j <= M`` are encoded as ``u * M + (j - 1)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .graph import Coloring, Graph
from .measure import Measure, MeasureInputError, sqrt_at_least
from .packing import Packing, covered_set, format_packing, max_tile_diameter, parse_packing, shrink
from .witness import WitnessFamily, WitnessInputError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Multipacking:
    packings: tuple[Packing, ...]
    vertex_count: int

    @property
    def m(self) -> int:
        return len(self.packings)

    def coverage_counts(self) -> list[int]:
        """A_x: number of packings covering each vertex."""
        counts = [0] * self.vertex_count
        for p in self.packings:
            for v in covered_set(p):
                counts[v] += 1
        return counts


@dataclass(frozen=True)
class LiftedPoint:
    base: int
    level: int


def lifted_sets(w: WitnessFamily, M: int) -> list[np.ndarray]:
    """Q(x) as encoded lifted indices, for a witness on the 1/M grid."""
    out = []
    for p in w.dist:
        us = sorted(p)
        units = []
        for u in us:
            k, rem = divmod(p[u].numerator * M, p[u].denominator)
            if rem:
                raise WitnessInputError(f"weight {p[u]} is not a multiple of 1/{M}")
            units.append(k)
        counts = np.array(units, dtype=np.int64)
        starts = np.repeat(np.array(us, dtype=np.int64) * M, counts)
        offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        out.append(starts + offsets)
    return out


def decode(index: int, M: int) -> LiftedPoint:
    return LiftedPoint(index // M, index % M + 1)


def exact_split_probability(w: WitnessFamily, x: int, y: int, M: int | None = None) -> Fraction:
    """1 - |Q(x) ∩ Q(y)| / |Q(x) ∪ Q(y)|."""
    M = M or w.denominator
    px, py = w.dist[x], w.dist[y]
    inter = union = 0
    for u in set(px) | set(py):
        a, b = int(px.get(u, 0) * M), int(py.get(u, 0) * M)
        inter += min(a, b)
        union += max(a, b)
    return 1 - Fraction(inter, union)


def _sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, index])


def _pad(sets: Sequence[Sequence[int]], sentinel: int) -> np.ndarray:
    width = max((len(q) for q in sets), default=1)
    arr = np.full((len(sets), width), sentinel, dtype=np.int64)
    for i, q in enumerate(sets):
        arr[i, : len(q)] = q
    return arr


def iter_rank_maps(sets: Sequence[Sequence[int]], universe: int, samples: int, seed: int) -> Iterator[np.ndarray]:
    """For each sample, the max-rank element of every set under i.i.d. uniform ranks.

    Sample ``i`` draws from ``(seed, i)`` alone, so results do not depend on
    evaluation order.
    """
    padded = _pad(sets, universe)
    rows = np.arange(len(sets))
    for i in range(samples):
        rng = _sample_rng(seed, i)
        ranks = rng.random(universe + 1)
        while np.unique(ranks[:universe]).size != universe:
            log.warning("rank collision in sample %d; redrawing", i)
            ranks = rng.random(universe + 1)
        ranks[universe] = -1.0
        yield padded[rows, np.argmax(ranks[padded], axis=1)]


def assignments(g: Graph, w: WitnessFamily, samples: int, seed: int, M: int | None = None) -> Iterator[np.ndarray]:
    """Per sample, phi(x) = max-rank lifted point of Q(x) (encoded)."""
    M = M or w.denominator
    return iter_rank_maps(lifted_sets(w, M), g.n * M, samples, seed)


def partition_from_map(phi: Sequence[int], diameter_bound: int) -> Packing:
    groups: dict[int, list[int]] = {}
    for x, target in enumerate(phi):
        groups.setdefault(int(target), []).append(x)
    return Packing.of(groups.values(), diameter_bound)


def build_partitions(
    g: Graph, w: WitnessFamily, samples: int, seed: int, M: int | None = None
) -> list[Packing]:
    """Random partitions of V: x and y share a tile iff their Q-sets peak at the same lifted point."""
    bound = 2 * w.support_radius
    return [partition_from_map(phi, bound) for phi in assignments(g, w, samples, seed, M)]


def partitions_from_permutations(
    g: Graph, w: WitnessFamily, coloring: Coloring, permutations: Sequence[Sequence[int]], M: int | None = None
) -> list[Packing]:
    """Deterministic mode: one partition per permutation of the lifted colors.

    ``coloring`` must separate vertices within distance 2R; lifted point
    ``(x, i)`` gets color ``(color(x) - 1) * M + i`` and ``perm[c - 1]`` is its
    permuted color.
    """
    M = M or w.denominator
    if coloring.separation_radius < 2 * w.support_radius:
        raise WitnessInputError("coloring separation is too small for argmax uniqueness")
    sets = lifted_sets(w, M)
    out = []
    for perm in permutations:
        if sorted(perm) != list(range(1, coloring.num_colors * M + 1)):
            raise WitnessInputError("permutation must rearrange all lifted colors")
        phi = []
        for q in sets:
            def key(idx: int) -> int:
                base, level = divmod(idx, M)
                return perm[(coloring.color_of[base] - 1) * M + level]
            phi.append(max(q, key=key))
        out.append(partition_from_map(phi, 2 * w.support_radius))
    return out


def partitions_to_multipacking(g: Graph, parts: Sequence[Packing], s: int) -> Multipacking:
    return Multipacking(tuple(shrink(g, p, s) for p in parts), g.n)


def tightness_defect(mp: Multipacking) -> Fraction:
    """max over x of #{i : x not covered by packing i} / m."""
    if mp.m < 1:
        raise ValueError("multipacking needs m >= 1")
    counts = mp.coverage_counts()
    return Fraction(mp.m - min(counts, default=mp.m), mp.m)


def shrink_defect_bound(g: Graph, mp: Multipacking, s: int) -> tuple[Fraction, Fraction, Fraction]:
    """(defect before, defect after shrinking by s, allowed d^(s+1) * defect before)."""
    before = tightness_defect(mp)
    after = tightness_defect(Multipacking(tuple(shrink(g, p, s) for p in mp.packings), mp.vertex_count))
    return before, after, g.degree_bound ** (s + 1) * before


def shrink_defect_bound_check(g: Graph, mp: Multipacking, s: int) -> bool:
    _, after, allowed = shrink_defect_bound(g, mp, s)
    return after <= allowed


def witness_from_multipacking(g: Graph, mp: Multipacking, n: int = 1) -> WitnessFamily:
    """p(x) = (sum of uniform measures on x's tiles) / A_x."""
    counts = mp.coverage_counts()
    for x, a in enumerate(counts):
        if a == 0:
            raise WitnessInputError(f"vertex {x} is covered by no packing")
    dist: list[dict[int, Fraction]] = [{} for _ in range(g.n)]
    for p in mp.packings:
        for t in p.tiles:
            for x in t:
                share = Fraction(1, len(t) * counts[x])
                px = dist[x]
                for y in t:
                    px[y] = px.get(y, Fraction(0)) + share
    radius = max((max_tile_diameter(g, p) for p in mp.packings), default=0)
    return WitnessFamily(n, tuple(dist), radius)


def measure_tight_count(mp: Multipacking, mu: Measure, epsilon: Fraction) -> int:
    """Number of packings whose covered set has mu-mass >= 1 - sqrt(epsilon)."""
    if len(mu.mass) != mp.vertex_count:
        raise MeasureInputError("measure and multipacking disagree on the vertex count")
    return sum(1 for p in mp.packings if sqrt_at_least(mu.of(covered_set(p)), epsilon))


def tight_count_guarantee(count: int, m: int, epsilon: Fraction) -> bool:
    """count >= (1 - sqrt(epsilon)) * m, compared by squaring."""
    short = m - count
    return short <= 0 or epsilon * m * m >= short * short


# ---------------------------------------------------------------- file format


def format_multipacking(mp: Multipacking) -> str:
    return "---\n".join(format_packing(p) for p in mp.packings)


def write_multipacking(mp: Multipacking, path: str | Path) -> None:
    Path(path).write_text(format_multipacking(mp))


def read_multipacking(path: str | Path, vertex_count: int) -> Multipacking:
    blocks = [b for b in Path(path).read_text().split("---") if b.strip()]
    return Multipacking(tuple(parse_packing(b) for b in blocks), vertex_count)


def coverage_rows(mp: Multipacking) -> list[tuple[int, int, int]]:
    return [(x, a, mp.m) for x, a in enumerate(mp.coverage_counts())]
