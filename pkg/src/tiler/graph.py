"""Finite bounded-degree graphs, metric helpers and test-graph generators."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

INF = math.inf


class GraphInputError(ValueError):
    """Malformed graph construction or an invalid vertex/set argument."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency lists are sorted tuples. Instances are immutable; the all-pairs
    distance matrix is computed lazily on first use and cached.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    name: str = field(default="graph", compare=False)

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.vertex_count:
            raise GraphInputError("adjacency length does not match vertex_count")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphInputError(f"neighbor list of {v} is not sorted/duplicate-free")
            for u in nbrs:
                if u == v:
                    raise GraphInputError(f"self-loop at {v}")
                if not 0 <= u < self.vertex_count:
                    raise GraphInputError(f"neighbor {u} of {v} out of range")
                if v not in self.adjacency[u]:
                    raise GraphInputError(f"edge {v}-{u} is not symmetric")

    @property
    def n(self) -> int:
        return self.vertex_count

    @cached_property
    def degree_bound(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def padded_adjacency(self) -> np.ndarray:
        """n x max(d, 1) neighbor table; short rows are padded with the vertex itself."""
        width = max(self.degree_bound, 1)
        arr = np.repeat(np.arange(self.n, dtype=np.int64)[:, None], width, axis=1)
        for u, nbrs in enumerate(self.adjacency):
            arr[u, : len(nbrs)] = nbrs
        return arr

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs hop distances; ``inf`` between components."""
        if self.n == 0:
            return np.zeros((0, 0))
        return shortest_path(self._csr, method="D", unweighted=True, directed=False)

    @cached_property
    def components(self) -> tuple[int, ...]:
        if self.n == 0:
            return ()
        _, labels = connected_components(self._csr, directed=False)
        return tuple(int(c) for c in labels)

    @cached_property
    def _csr(self) -> csr_matrix:
        rows = [u for u in range(self.n) for _ in self.adjacency[u]]
        cols = [v for u in range(self.n) for v in self.adjacency[u]]
        return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n))

    def check_vertex(self, x: int) -> None:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.n:
            raise GraphInputError(f"invalid vertex id {x!r}")

    def check_set(self, members: Iterable[int]) -> frozenset[int]:
        s = frozenset(int(v) for v in members)
        for v in s:
            self.check_vertex(v)
        return s

    def dist(self, x: int, y: int) -> float:
        return float(self.distances[x, y])

    def __repr__(self) -> str:
        return f"Graph({self.name!r}, n={self.n}, d={self.degree_bound})"


@dataclass(frozen=True)
class Coloring:
    color_of: tuple[int, ...]
    num_colors: int
    separation_radius: int


# ---------------------------------------------------------------- metric ops


def ball(g: Graph, x: int, r: int) -> frozenset[int]:
    """Vertices within hop distance ``r`` of ``x`` (breadth-first layers)."""
    g.check_vertex(x)
    if r < 0:
        raise GraphInputError("radius must be nonnegative")
    seen = {x}
    frontier = [x]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for v in g.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def neighborhood(g: Graph, members: Iterable[int], r: int) -> frozenset[int]:
    """The r-neighborhood N_r(J) of a vertex set."""
    seen = set(g.check_set(members))
    frontier = list(seen)
    for _ in range(r):
        nxt = []
        for u in frontier:
            for v in g.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def bfs_distances(g: Graph, sources: Iterable[int], limit: int | None = None) -> dict[int, int]:
    """Multi-source BFS; distances up to ``limit`` (inclusive)."""
    dist = {s: 0 for s in sources}
    queue = deque(dist)
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for v in g.adjacency[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def boundary(g: Graph, members: Iterable[int]) -> frozenset[int]:
    """Vertices of L having a neighbor outside L."""
    L = g.check_set(members)
    return frozenset(x for x in L if not g.neighbor_sets[x] <= L)


def boundary_size(g: Graph, L: frozenset[int] | set[int]) -> int:
    """Unchecked |boundary(L)| for hot loops."""
    nb = g.neighbor_sets
    return sum(1 for x in L if not nb[x] <= L)


def k_boundary(g: Graph, members: Iterable[int], k: int) -> frozenset[int]:
    """Vertices of J within distance k of the complement of J."""
    if k < 1:
        raise GraphInputError("k must be >= 1")
    J = g.check_set(members)
    outside = [v for v in range(g.n) if v not in J]
    if not outside:
        return frozenset()
    near = bfs_distances(g, outside, limit=k)
    return frozenset(x for x in J if x in near)


def folner_quotient(g: Graph, members: Iterable[int]) -> Fraction:
    L = g.check_set(members)
    if not L:
        raise GraphInputError("Følner quotient of the empty set")
    return Fraction(boundary_size(g, L), len(L))


def set_diameter(g: Graph, members: Iterable[int]) -> float:
    """Max ambient distance over pairs; ``inf`` if the set meets two components."""
    L = sorted(g.check_set(members))
    if not L:
        raise GraphInputError("diameter of the empty set")
    if len(L) == 1:
        return 0
    sub = g.distances[np.ix_(L, L)]
    d = sub.max()
    return INF if math.isinf(d) else int(d)


def distance_coloring(g: Graph, r: int) -> Coloring:
    """Greedy coloring in vertex-id order; vertices within distance r differ."""
    if r < 1:
        raise GraphInputError("separation radius must be >= 1")
    color = [0] * g.n
    for x in range(g.n):
        used = {color[y] for y in ball(g, x, r) if color[y]}
        c = 1
        while c in used:
            c += 1
        color[x] = c
    return Coloring(tuple(color), max(color, default=0), r)


def is_valid_coloring(g: Graph, c: Coloring) -> bool:
    D = g.distances
    for x, y in itertools.combinations(range(g.n), 2):
        if D[x, y] <= c.separation_radius and c.color_of[x] == c.color_of[y]:
            return False
    return True


# ---------------------------------------------------------------- generators


def from_edge_list(n: int, pairs: Iterable[Sequence[int]], name: str = "graph") -> Graph:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for pair in pairs:
        if len(pair) != 2:
            raise GraphInputError(f"malformed edge {pair!r}")
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphInputError(f"edge {pair!r} out of range for {n} vertices")
        if u == v:
            raise GraphInputError(f"self-loop {pair!r}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs), name=name)


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphInputError("cycle needs at least 3 vertices")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)], name=f"C_{n}")


def path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)], name=f"P_{n}")


def complete(n: int) -> Graph:
    return from_edge_list(n, itertools.combinations(range(n), 2), name=f"K_{n}")


def star(leaves: int) -> Graph:
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)], name=f"K_1,{leaves}")


def empty(n: int = 0) -> Graph:
    return from_edge_list(n, [], name=f"empty_{n}")


def _lattice(sides: Sequence[int], wrap: bool, name: str) -> Graph:
    sides = [int(s) for s in sides]
    if not sides or any(s < 1 for s in sides):
        raise GraphInputError("side lengths must be positive")
    coords = list(itertools.product(*[range(s) for s in sides]))
    index = {c: i for i, c in enumerate(coords)}
    edges = []
    for c in coords:
        for axis, side in enumerate(sides):
            nxt = list(c)
            nxt[axis] += 1
            if nxt[axis] == side:
                if not wrap or side < 3:
                    continue
                nxt[axis] = 0
            edges.append((index[c], index[tuple(nxt)]))
    return from_edge_list(len(coords), edges, name=name)


def torus(dim: int, sides: Sequence[int]) -> Graph:
    if len(sides) != dim:
        raise GraphInputError("need one side length per dimension")
    return _lattice(sides, True, f"torus{dim}({'x'.join(map(str, sides))})")


def grid(dim: int, sides: Sequence[int]) -> Graph:
    if len(sides) != dim:
        raise GraphInputError("need one side length per dimension")
    return _lattice(sides, False, f"grid{dim}({'x'.join(map(str, sides))})")


def regular_tree(degree: int, depth: int) -> Graph:
    """Truncated ``degree``-regular tree: root has ``degree`` children, others ``degree-1``."""
    edges = []
    frontier = [0]
    n = 1
    for level in range(depth):
        nxt = []
        for u in frontier:
            for _ in range(degree if level == 0 else degree - 1):
                edges.append((u, n))
                nxt.append(n)
                n += 1
        frontier = nxt
    return from_edge_list(n, edges, name=f"T{degree}(depth {depth})")


def cayley(table: Sequence[Sequence[int]], generators: Sequence[int]) -> Graph:
    """Right Cayley graph of a finite group given by its multiplication table.

    ``table[a][b]`` is the index of ``a*b``; the generator list must be
    closed under inverses and must not contain the identity.
    """
    order = len(table)
    if any(len(row) != order for row in table):
        raise GraphInputError("multiplication table must be square")
    identity = next((e for e in range(order) if list(table[e]) == list(range(order))), None)
    if identity is None:
        raise GraphInputError("multiplication table has no identity")
    gens = sorted(set(int(s) for s in generators))
    if identity in gens:
        raise GraphInputError("identity in generator list would create self-loops")
    for s in gens:
        inv = next((t for t in range(order) if table[s][t] == identity), None)
        if inv is None or inv not in gens:
            raise GraphInputError(f"generator {s} has no inverse in the generator list")
    edges = [(a, table[a][s]) for a in range(order) for s in gens]
    return from_edge_list(order, edges, name=f"cayley({order})")


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def generate(spec: dict) -> Graph:
    """Build a graph from a structured spec such as ``{"family": "cycle", "n": 10}``."""
    family = spec.get("family")
    if family == "cycle":
        return cycle(int(spec["n"]))
    if family == "path":
        return path(int(spec["n"]))
    if family == "complete":
        return complete(int(spec["n"]))
    if family == "star":
        return star(int(spec["leaves"]))
    if family == "empty":
        return empty(int(spec.get("n", 0)))
    if family == "torus":
        return torus(int(spec["dim"]), spec["sides"])
    if family == "grid":
        return grid(int(spec["dim"]), spec["sides"])
    if family == "tree":
        return regular_tree(int(spec["degree"]), int(spec["depth"]))
    if family == "cayley":
        table = spec.get("table")
        if table is None and "cyclic" in spec:
            table = cyclic_group_table(int(spec["cyclic"]))
        return cayley(table, spec["generators"])
    if family == "edges":
        return from_edge_list(int(spec["n"]), spec["edges"])
    if family == "file":
        return read_graph(spec["path"])
    raise GraphInputError(f"unknown graph family {family!r}")


# ---------------------------------------------------------------- file format


def write_graph(g: Graph, path: str | Path) -> None:
    lines = [f"vertices {g.n}"] + [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph(path: str | Path) -> Graph:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("vertices"):
        raise GraphInputError("graph file must start with 'vertices N'")
    try:
        n = int(lines[0].split()[1])
        pairs = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    except (IndexError, ValueError) as exc:
        raise GraphInputError(f"malformed graph file: {exc}") from exc
    return from_edge_list(n, pairs, name=Path(path).stem)
