"""Witness families: per-vertex finitely supported distributions with exact weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np

from .graph import Graph, GraphInputError

Distribution = Mapping[int, Fraction]


class WitnessInputError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessFamily:
    """``dist[x]`` maps support vertices to positive exact weights.

    ``n`` is the quality target (neighbor L1 below 1/n) and is not enforced
    here; :func:`validate_witness` decides.
    """

    n: int
    dist: tuple[dict[int, Fraction], ...]
    support_radius: int

    def __post_init__(self) -> None:
        for x, p in enumerate(self.dist):
            for y, w in p.items():
                if w.numerator < 0:
                    raise WitnessInputError(f"negative weight p({x},{y}) = {w}")

    def support(self, x: int) -> list[int]:
        return sorted(y for y, w in self.dist[x].items() if w > 0)

    @property
    def denominator(self) -> int:
        """Least common denominator of all weights."""
        return math.lcm(*{w.denominator for p in self.dist for w in p.values()}) if self.dist else 1


@dataclass(frozen=True)
class WitnessReport:
    max_neighbor_l1: Fraction
    max_support_radius: float
    sums_ok: bool
    passes: bool
    worst_edge: tuple[int, int] | None = None


def _check_normalized(p: Distribution) -> None:
    if any(w < 0 for w in p.values()) or sum(p.values(), Fraction(0)) != 1:
        raise WitnessInputError("distribution is not a nonnegative weight vector summing to 1")


def l1_distance(p: Distribution, q: Distribution) -> Fraction:
    _check_normalized(p)
    _check_normalized(q)
    return _l1(p, q)


def _l1(p: Distribution, q: Distribution) -> Fraction:
    total = Fraction(0)
    for y, w in p.items():
        total += abs(w - q.get(y, 0))
    for y, w in q.items():
        if y not in p:
            total += w
    return total


def uniform_ball_witness(g: Graph, r: int, n: int = 1) -> WitnessFamily:
    if r < 0:
        raise GraphInputError("radius must be nonnegative")
    dist = []
    D = g.distances
    for x in range(g.n):
        b = np.flatnonzero(D[x] <= r).tolist()
        w = Fraction(1, len(b))
        dist.append(dict.fromkeys(b, w))
    return WitnessFamily(n, tuple(dist), r)


def point_mass_witness(g: Graph, n: int = 1) -> WitnessFamily:
    return WitnessFamily(n, tuple({x: Fraction(1)} for x in range(g.n)), 0)


def validate_witness(g: Graph, w: WitnessFamily) -> WitnessReport:
    if len(w.dist) != g.n:
        raise WitnessInputError("witness has the wrong number of vertices")
    sums_ok = all(sum(p.values(), Fraction(0)) == 1 for p in w.dist)
    worst, worst_edge = Fraction(0), None
    for x, y in g.edges:
        d = _l1(w.dist[x], w.dist[y])
        if d > worst:
            worst, worst_edge = d, (x, y)
    radius = 0
    D = g.distances
    for x, p in enumerate(w.dist):
        for y, wt in p.items():
            if wt > 0:
                radius = max(radius, D[x, y])
    radius = math.inf if math.isinf(radius) else int(radius)
    passes = sums_ok and worst < Fraction(1, w.n) and radius <= w.support_radius
    return WitnessReport(worst, radius, sums_ok, passes, worst_edge)


def rationalize(w: WitnessFamily, M: int) -> WitnessFamily:
    """Round every weight to the 1/M grid, keeping per-vertex sums at exactly 1.

    Floors to the grid, then hands the residual units to the entries with the
    largest remainders (ties: smaller vertex id).
    """
    max_support = max((len(p) for p in w.dist), default=0)
    if M < max(max_support, 1):
        raise WitnessInputError(f"M={M} is smaller than the largest support ({max_support})")
    out = []
    for p in w.dist:
        ys = sorted(p)
        units = {y: (p[y] * M).numerator // (p[y] * M).denominator for y in ys}
        residual = M - sum(units.values())
        order = sorted(ys, key=lambda y: (-(p[y] * M - units[y]), y))
        for y in order[:residual]:
            units[y] += 1
        out.append({y: Fraction(units[y], M) for y in ys if units[y] > 0})
    return WitnessFamily(w.n, tuple(out), w.support_radius)


def is_rationalized(w: WitnessFamily, M: int) -> bool:
    return all((wt * M).denominator == 1 for p in w.dist for wt in p.values())


def truncate_support(g: Graph, w: WitnessFamily, x: int, epsilon: Fraction) -> frozenset[int]:
    """Support points within the minimal radius r carrying mass >= 1 - epsilon/3."""
    g.check_vertex(x)
    if epsilon <= 0:
        raise WitnessInputError("epsilon must be positive")
    threshold = 1 - Fraction(epsilon) / 3
    D = g.distances
    pts = sorted((D[x, y], y) for y, wt in w.dist[x].items() if wt > 0)
    mass = Fraction(0)
    if threshold <= 0:
        return frozenset(y for d, y in pts if d == 0)
    i = 0
    while i < len(pts):
        r = pts[i][0]
        while i < len(pts) and pts[i][0] == r:
            mass += w.dist[x][pts[i][1]]
            i += 1
        if mass >= threshold:
            return frozenset(y for d, y in pts if d <= r)
    return frozenset(y for _, y in pts)


# ---------------------------------------------------------------- file format


def format_witness(w: WitnessFamily) -> str:
    lines = [f"witness {w.n} {w.support_radius}"]
    for x, p in enumerate(w.dist):
        for y in sorted(p):
            lines.append(f"{x} {y} {p[y].numerator} {p[y].denominator}")
    return "\n".join(lines) + "\n"


def write_witness(w: WitnessFamily, path: str | Path) -> None:
    Path(path).write_text(format_witness(w))


def read_witness(path: str | Path, vertex_count: int) -> WitnessFamily:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0][0] != "witness" or len(lines[0]) != 3:
        raise WitnessInputError("witness file must start with 'witness n r_n'")
    n, r = int(lines[0][1]), int(lines[0][2])
    dist: list[dict[int, Fraction]] = [{} for _ in range(vertex_count)]
    for parts in lines[1:]:
        if len(parts) != 4:
            raise WitnessInputError(f"malformed witness line {' '.join(parts)!r}")
        x, y, num, den = map(int, parts)
        if not (0 <= x < vertex_count and 0 <= y < vertex_count):
            raise WitnessInputError(f"vertex out of range in line {' '.join(parts)!r}")
        dist[x][y] = dist[x].get(y, Fraction(0)) + Fraction(num, den)
    return WitnessFamily(n, tuple(dist), r)
