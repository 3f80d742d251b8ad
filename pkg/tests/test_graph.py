import math
from fractions import Fraction

import pytest

from tiler import graph
from tiler.graph import GraphInputError


def test_ball_examples():
    c10 = graph.cycle(10)
    assert graph.ball(c10, 0, 0) == {0}
    assert graph.ball(c10, 0, 2) == {8, 9, 0, 1, 2}
    assert graph.ball(graph.path(3), 1, 5) == {0, 1, 2}


def test_ball_rejects_bad_vertex():
    with pytest.raises(GraphInputError):
        graph.ball(graph.cycle(5), 7, 1)


def test_boundary_examples(c12):
    assert graph.boundary(c12, range(12)) == frozenset()
    assert graph.boundary(c12, range(5)) == {0, 4}
    g = graph.grid(2, [10, 10])
    block = {r * 10 + c for r in range(4, 7) for c in range(4, 7)}
    assert graph.boundary(g, block) == block - {55}


def test_k_boundary(c12):
    J = set(range(6))
    assert graph.k_boundary(c12, J, 1) == graph.boundary(c12, J)
    assert graph.k_boundary(c12, J, 2) == {0, 1, 4, 5}
    assert graph.k_boundary(c12, range(12), 3) == frozenset()


def test_folner_quotient():
    c100 = graph.cycle(100)
    assert graph.folner_quotient(c100, range(100)) == 0
    assert graph.folner_quotient(c100, range(5)) == Fraction(2, 5)
    t = graph.torus(2, [10, 10])
    assert graph.folner_quotient(t, {r * 10 + c for r in range(4) for c in range(4)}) == Fraction(12, 16)
    with pytest.raises(GraphInputError):
        graph.folner_quotient(c100, [])


def test_set_diameter():
    c10 = graph.cycle(10)
    assert graph.set_diameter(c10, {3}) == 0
    assert graph.set_diameter(c10, {0, 5}) == 5
    two = graph.from_edge_list(4, [(0, 1), (2, 3)])
    assert math.isinf(graph.set_diameter(two, {0, 2}))


def test_distance_coloring_examples():
    assert graph.distance_coloring(graph.path(3), 1).color_of == (1, 2, 1)
    assert graph.distance_coloring(graph.cycle(3), 1).num_colors == 3
    c9 = graph.distance_coloring(graph.cycle(9), 2)
    assert c9.color_of == (1, 2, 3) * 3 and c9.num_colors == 3
    assert graph.is_valid_coloring(graph.cycle(9), c9)


def test_generators():
    tri = graph.cycle(3)
    assert tri.n == 3 and all(len(a) == 2 for a in tri.adjacency)
    t = graph.torus(2, [4, 4])
    assert t.n == 16 and {len(a) for a in t.adjacency} == {4}
    e = graph.from_edge_list(2, [(0, 1), (1, 0)])
    assert e.adjacency == ((1,), (0,)) and len(e.edges) == 1


def test_cayley_matches_cycle():
    g = graph.cayley(graph.cyclic_group_table(8), [1, 7])
    assert graph.folner_quotient(g, range(4)) == Fraction(2, 4)
    assert g.degree_bound == 2


@pytest.mark.parametrize(
    "pairs", [[(0, 0)], [(0, 5)], [(0,)]]
)
def test_malformed_edge_lists(pairs):
    with pytest.raises(GraphInputError):
        graph.from_edge_list(3, pairs)


def test_asymmetric_generators():
    with pytest.raises(GraphInputError):
        graph.cayley(graph.cyclic_group_table(6), [1])


def test_generate_spec_and_unknown_family():
    assert graph.generate({"family": "torus", "dim": 2, "sides": [3, 4]}).n == 12
    with pytest.raises(GraphInputError):
        graph.generate({"family": "moebius"})


def test_graph_file_round_trip(tmp_path):
    g = graph.torus(2, [5, 3])
    graph.write_graph(g, tmp_path / "g.txt")
    h = graph.read_graph(tmp_path / "g.txt")
    assert h.n == g.n and h.edges == g.edges
