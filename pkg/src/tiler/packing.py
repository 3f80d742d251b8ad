"""Packings: disjoint bounded-diameter tiles, separation, shrink and join."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .graph import Graph, GraphInputError, bfs_distances, set_diameter


class JoinDiameterError(RuntimeError):
    """A join component exceeded the caller's diameter cap."""

    def __init__(self, component: tuple[int, ...], diameter: float, cap: int):
        super().__init__(f"join component of diameter {diameter} exceeds cap {cap}: {list(component)[:20]}")
        self.component = component
        self.diameter = diameter
        self.cap = cap


@dataclass(frozen=True)
class Packing:
    """Disjoint tiles, each stored as a sorted tuple; tiles ordered by smallest member."""

    tiles: tuple[tuple[int, ...], ...]
    diameter_bound: int

    @classmethod
    def of(cls, tiles: Iterable[Iterable[int]], diameter_bound: int | None = None, g: Graph | None = None) -> "Packing":
        ts = [tuple(sorted(set(int(v) for v in t))) for t in tiles]
        ts = sorted((t for t in ts if t), key=lambda t: t)
        if diameter_bound is None:
            if g is None:
                raise ValueError("need a diameter bound or a graph to measure tiles")
            diams = [set_diameter(g, t) for t in ts]
            diameter_bound = int(max(diams, default=0)) if all(not math.isinf(d) for d in diams) else -1
        return cls(tuple(ts), int(diameter_bound))

    @classmethod
    def empty(cls) -> "Packing":
        return cls((), 0)

    def __len__(self) -> int:
        return len(self.tiles)

    def tile_of(self) -> dict[int, int]:
        return {v: i for i, t in enumerate(self.tiles) for v in t}


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def validate_packing(g: Graph, p: Packing) -> bool:
    seen: set[int] = set()
    for t in p.tiles:
        if not t:
            return False
        for v in t:
            if not 0 <= v < g.n or v in seen:
                return False
            seen.add(v)
        d = set_diameter(g, t)
        if math.isinf(d) or d > p.diameter_bound:
            return False
    return True


def covered_set(p: Packing) -> frozenset[int]:
    return frozenset(v for t in p.tiles for v in t)


def restrict_inside(p: Packing, J: Iterable[int]) -> frozenset[int]:
    """Union of the tiles fully contained in J."""
    J = frozenset(J)
    return frozenset(v for t in p.tiles if J.issuperset(t) for v in t)


def is_s_separated(g: Graph, p: Packing, s: int) -> bool:
    if s < 0:
        raise GraphInputError("separation must be nonnegative")
    owner = p.tile_of()
    for i, t in enumerate(p.tiles):
        near = bfs_distances(g, t, limit=s)
        for v in near:
            j = owner.get(v)
            if j is not None and j != i:
                return False
    return True


def shrink(g: Graph, p: Packing, s: int) -> Packing:
    """Deep interiors of the tiles at depth ``s``.

    A vertex survives when it is farther than ``s`` from everything outside
    its own tile; survivors of one tile are grouped by s-proximity (for
    ``s = 1`` this is graph connectivity), so the output is s-separated.
    """
    if s < 1:
        raise GraphInputError("shrink depth must be >= 1")
    out = []
    for t in p.tiles:
        deep = sorted(_interior(g, t, s))
        if not deep:
            continue
        index = {v: i for i, v in enumerate(deep)}
        uf = UnionFind(len(deep))
        for v in deep:
            for u in bfs_distances(g, [v], limit=s):
                if u in index:
                    uf.union(index[v], index[u])
        groups: dict[int, list[int]] = {}
        for v in deep:
            groups.setdefault(uf.find(index[v]), []).append(v)
        out.extend(groups.values())
    return Packing.of(out, p.diameter_bound)


def _interior(g: Graph, t: Iterable[int], s: int) -> set[int]:
    """Members of t at distance > s from the complement of t."""
    tile = set(t)
    # a shortest path to the complement stays inside t until its last step
    dist = {}
    frontier = []
    for v in tile:
        if any(u not in tile for u in g.adjacency[v]):
            dist[v] = 1
            frontier.append(v)
    depth = 1
    while frontier and depth < s:
        depth += 1
        nxt = []
        for v in frontier:
            for u in g.adjacency[v]:
                if u in tile and u not in dist:
                    dist[u] = depth
                    nxt.append(u)
        frontier = nxt
    return tile - dist.keys()


def join(g: Graph, f: Packing, fp: Packing, cap: int | None = None) -> Packing:
    """Finest partition of [f] ∪ [fp] closed under same-tile and adjacency hops."""
    covered = sorted(covered_set(f) | covered_set(fp))
    index = {v: i for i, v in enumerate(covered)}
    uf = UnionFind(len(covered))
    for pk in (f, fp):
        for t in pk.tiles:
            for v in t[1:]:
                uf.union(index[t[0]], index[v])
    for v in covered:
        for u in g.adjacency[v]:
            if u > v and u in index:
                uf.union(index[v], index[u])
    groups: dict[int, list[int]] = {}
    for v in covered:
        groups.setdefault(uf.find(index[v]), []).append(v)
    tiles = list(groups.values())
    diam = 0
    for t in tiles:
        d = set_diameter(g, t)
        if cap is not None and d > cap:
            raise JoinDiameterError(tuple(t), d, cap)
        if not math.isinf(d):
            diam = max(diam, int(d))
        elif cap is None:
            raise JoinDiameterError(tuple(t), d, -1)
    return Packing.of(tiles, diam)


def max_tile_diameter(g: Graph, p: Packing) -> int:
    return int(max((set_diameter(g, t) for t in p.tiles), default=0))


def write_packing(p: Packing, path: str | Path) -> None:
    Path(path).write_text(format_packing(p))


def format_packing(p: Packing) -> str:
    lines = [f"packing k={p.diameter_bound}"] + [" ".join(map(str, t)) for t in p.tiles]
    return "\n".join(lines) + "\n"


def parse_packing(text: str) -> Packing:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("packing k="):
        raise GraphInputError("packing block must start with 'packing k=<bound>'")
    k = int(lines[0].split("=", 1)[1])
    return Packing.of([[int(t) for t in ln.split()] for ln in lines[1:]], k)


def read_packing(path: str | Path) -> Packing:
    return parse_packing(Path(path).read_text())
