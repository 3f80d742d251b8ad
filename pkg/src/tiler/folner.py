"""Desk-scale Følner searches and the greedy Packing Principle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .graph import Graph, GraphInputError, boundary_size, neighborhood, set_diameter
from .packing import Packing


@dataclass(frozen=True)
class FolnerSearchConfig:
    epsilon: Fraction
    max_radius: int
    candidate_budget: int = 500

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise GraphInputError("epsilon must lie in (0, 1)")
        if self.max_radius < 1 or self.candidate_budget < 1:
            raise GraphInputError("max_radius and candidate_budget must be >= 1")


def _quality(g: Graph, s: frozenset[int]) -> tuple[Fraction, int, tuple[int, ...]]:
    return (Fraction(boundary_size(g, s), len(s)), len(s), tuple(sorted(s)))


def _layers(g: Graph, seed: Iterable[int], max_radius: int, region: frozenset[int] | None):
    """Yield (r, N_r(seed) ∩ region) until the neighborhood stops growing."""
    seen = set(seed)
    frontier = list(seen)
    members = {v for v in seen if region is None or v in region}
    yield 0, frozenset(members)
    for r in range(1, max_radius + 1):
        nxt = []
        for u in frontier:
            for v in g.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            return
        frontier = nxt
        members.update(v for v in nxt if region is None or v in region)
        yield r, frozenset(members)


def _improve(g, start, allowed, required, eps, budget):
    """Steepest-descent on the Følner quotient inside ``allowed``."""
    current = start
    q = _quality(g, current)
    while q[0] >= eps and budget > 0:
        moves = []
        nb = g.neighbor_sets
        for v in sorted(current):
            if v not in required and len(current) > 1 and not nb[v] <= current:
                moves.append(current - {v})
        for v in sorted({u for x in current for u in nb[x]} - current):
            if v in allowed:
                moves.append(current | {v})
        best = None
        for m in moves[:budget]:
            mq = _quality(g, m)
            if best is None or mq < best[0]:
                best = (mq, m)
        budget -= min(len(moves), budget)
        if best is None or best[0] >= q:
            break
        q, current = best
    return current if q[0] < eps else None


def find_folner_in_ball(
    g: Graph, x: int, cfg: FolnerSearchConfig, within: Iterable[int] | None = None
) -> frozenset[int] | None:
    """Lowest-quotient nested ball around x, then bounded local descent.

    With ``within`` given, candidates are intersected with that region; the
    quotient is still measured in g.
    """
    g.check_vertex(x)
    region = None if within is None else frozenset(within)
    if region is not None and x not in region:
        return None
    best = None
    for _, s in _layers(g, [x], cfg.max_radius, region):
        q = _quality(g, s)
        if best is None or q < best[0]:
            best = (q, s)
    assert best is not None
    if best[0][0] < cfg.epsilon:
        return best[1]
    allowed = neighborhood(g, [x], cfg.max_radius)
    if region is not None:
        allowed = allowed & region
    return _improve(g, best[1], allowed, frozenset(), cfg.epsilon, cfg.candidate_budget)


def find_folner_containing(
    g: Graph, J: Iterable[int], epsilon: Fraction, max_radius: int, budget: int = 500
) -> frozenset[int] | None:
    """First layer N_r(J) with quotient below epsilon, else local descent."""
    J = g.check_set(J)
    if not J:
        raise GraphInputError("J must be nonempty")
    best = None
    for _, s in _layers(g, J, max_radius, None):
        q = _quality(g, s)
        if q[0] < epsilon:
            return s
        if best is None or q < best[0]:
            best = (q, s)
    allowed = neighborhood(g, J, max_radius)
    return _improve(g, best[1], allowed, J, epsilon, budget)


def _profile(g: Graph, center: int, region: frozenset[int]):
    """Layer sizes and boundary counts of region ∩ B_r(center), r = 0 .. eccentricity."""
    D = g.distances[center]
    inside = np.zeros(g.n, dtype=bool)
    inside[list(region)] = True
    # outer reach: a member at distance <= r is on the boundary of layer r iff some neighbor is farther than r or outside
    nb = g.padded_adjacency
    reach = np.where(inside[nb], D[nb], np.inf).max(axis=1)
    finite = D[np.isfinite(D)]
    R = int(finite.max())
    dm, rm = D[inside], np.maximum(reach[inside], D[inside])
    radii = np.arange(R + 1)
    sizes = np.searchsorted(np.sort(dm), radii, side="right")
    interior = np.searchsorted(np.sort(rm), radii, side="right")
    return D, inside, sizes, sizes - interior


def _fits(g: Graph, D: np.ndarray, inside: np.ndarray, r: int, k_cap: int) -> bool:
    # layers are nested, so their diameters are nondecreasing in r
    if 2 * r <= k_cap:
        return True
    members = np.flatnonzero(inside & (D <= r))
    return g.distances[np.ix_(members, members)].max() <= k_cap


def _layer(D: np.ndarray, inside: np.ndarray, r: int) -> frozenset[int]:
    return frozenset(int(v) for v in np.flatnonzero(inside & (D <= r)))


def _qualifying(sizes: np.ndarray, bnd: np.ndarray, eps: Fraction) -> list[int]:
    # python ints: eps may carry a huge denominator
    num, den = eps.numerator, eps.denominator
    return [r for r, (n, b) in enumerate(zip(sizes.tolist(), bnd.tolist())) if b * den < num * n]


def _grow_first(g: Graph, center: int, region: frozenset[int], eps: Fraction, k_cap: int):
    """Smallest nested ball around center (inside region) that is eps-Følner with diameter <= k_cap."""
    D, inside, sizes, bnd = _profile(g, center, region)
    for r in _qualifying(sizes, bnd, eps):
        return _layer(D, inside, r) if _fits(g, D, inside, r, k_cap) else None
    return None


def _grow_best(g: Graph, center: int, region: frozenset[int], eps: Fraction, k_cap: int):
    D, inside, sizes, bnd = _profile(g, center, region)
    best = None
    for r in _qualifying(sizes, bnd, eps):
        if not _fits(g, D, inside, r, k_cap):
            break
        q = (Fraction(int(bnd[r]), int(sizes[r])), int(sizes[r]))
        if best is None or q < best[0]:
            best = (q, int(r))
    return None if best is None else _layer(D, inside, best[1])


def _component_tiles(g: Graph, J: frozenset[int], k_cap: int) -> tuple[Packing, Fraction]:
    comp = g.components
    members: dict[int, list[int]] = {}
    for v in range(g.n):
        members.setdefault(comp[v], []).append(v)
    tiles = [c for c in members.values() if set(c) <= J and set_diameter(g, c) <= k_cap]
    return Packing.of(tiles, k_cap), Fraction(sum(map(len, tiles)), len(J))


def packing_principle(
    g: Graph, J: Iterable[int], epsilon: Fraction, k_cap: int, policy: str = "first"
) -> tuple[Packing, Fraction]:
    """Greedy peel of disjoint eps-Følner tiles of diameter <= k_cap inside J.

    Centers are visited in increasing id. ``policy="first"`` takes the
    smallest qualifying nested ball, ``"best"`` the lowest-quotient one.
    Leftover vertices are then absorbed into adjacent tiles when the tile
    stays qualifying. Returns the packing and the covered fraction of J.
    """
    if k_cap < 1:
        raise GraphInputError("k_cap must be >= 1")
    J = g.check_set(J)
    if not J:
        raise GraphInputError("J must be nonempty")
    if boundary_size(g, J) < epsilon * len(J) and set_diameter(g, J) <= k_cap:
        return Packing.of([J], k_cap), Fraction(1)
    epsilon = Fraction(epsilon)
    if epsilon * len(J) <= 1:
        # any non-component tile has boundary >= 1, so it would need more than 1/eps vertices
        return _component_tiles(g, J, k_cap)
    grow = _grow_first if policy == "first" else _grow_best
    remainder = set(J)
    tiles: list[set[int]] = []
    for c in sorted(J):
        if c not in remainder:
            continue
        t = grow(g, c, frozenset(remainder), epsilon, k_cap)
        if t:
            tiles.append(set(t))
            remainder -= t
    changed = True
    while changed and remainder and tiles:
        changed = False
        owner = {v: i for i, t in enumerate(tiles) for v in t}
        for v in sorted(remainder):
            for i in sorted({owner[u] for u in g.adjacency[v] if u in owner}):
                cand = frozenset(tiles[i] | {v})
                if boundary_size(g, cand) < epsilon * len(cand) and set_diameter(g, cand) <= k_cap:
                    tiles[i].add(v)
                    owner[v] = i
                    remainder.discard(v)
                    changed = True
                    break
    covered = sum(len(t) for t in tiles)
    return Packing.of(tiles, k_cap), Fraction(covered, len(J))
