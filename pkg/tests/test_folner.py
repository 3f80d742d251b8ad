import itertools
from fractions import Fraction

import pytest

from tiler import graph
from tiler.folner import FolnerSearchConfig, find_folner_containing, find_folner_in_ball, packing_principle
from tiler.graph import GraphInputError


def test_ball_search_on_cycle():
    g = graph.cycle(100)
    got = find_folner_in_ball(g, 0, FolnerSearchConfig(Fraction(1, 2), 3))
    assert got == graph.ball(g, 0, 3)
    assert graph.folner_quotient(g, got) == Fraction(2, 7)


def test_complete_graph_gives_whole_component():
    g = graph.complete(6)
    assert find_folner_in_ball(g, 2, FolnerSearchConfig(Fraction(1, 10), 10)) == frozenset(range(6))


def test_tree_has_no_folner_set_nearby():
    g = graph.regular_tree(3, 8)
    x = next(v for v in range(g.n) if all(len(g.adjacency[u]) == 3 for u in graph.ball(g, v, 1)))
    B = graph.ball(g, x, 2)
    assert not any(
        graph.folner_quotient(g, S) < Fraction(1, 10) for k in range(1, len(B) + 1) for S in itertools.combinations(B, k)
    )
    assert find_folner_in_ball(g, x, FolnerSearchConfig(Fraction(1, 10), 2)) is None


def test_containing_search():
    g = graph.cycle(100)
    arc = set(range(10))
    assert find_folner_containing(g, arc, Fraction(1, 2), 5) == arc
    got = find_folner_containing(g, {0}, Fraction(1, 3), 10)
    assert 0 in got and len(got) >= 7 and graph.folner_quotient(g, got) < Fraction(1, 3)
    t = graph.torus(2, [20, 20])
    got = find_folner_containing(t, {0}, Fraction(1, 2), 10)
    assert got == graph.ball(t, 0, 3)


def test_config_validation():
    with pytest.raises(GraphInputError):
        FolnerSearchConfig(Fraction(1), 3)
    with pytest.raises(GraphInputError):
        FolnerSearchConfig(Fraction(1, 2), 0)


def test_packing_principle_trivial_cases():
    g = graph.cycle(9)
    p, cov = packing_principle(g, range(9), Fraction(1, 4), 8)
    assert p.tiles == (tuple(range(9)),) and cov == 1
    arc = graph.cycle(40)
    p, cov = packing_principle(arc, range(10), Fraction(1, 2), 9)
    assert p.tiles == (tuple(range(10)),) and cov == 1


def test_packing_principle_on_path():
    # the greedy takes the smallest qualifying ball from each center in turn, then absorbs leftovers
    g = graph.path(20)
    p, cov = packing_principle(g, range(20), Fraction(1, 2), 6)
    assert cov == 1
    assert [sorted(t) for t in p.tiles] == [[0, 1, 2], list(range(3, 8)), list(range(8, 13)), list(range(13, 20))]
    for t in p.tiles:
        assert graph.folner_quotient(g, t) < Fraction(1, 2) and graph.set_diameter(g, t) <= 6


def test_packing_principle_policies_both_valid():
    g = graph.torus(2, [10, 10])
    for policy in ("first", "best"):
        p, cov = packing_principle(g, range(100), Fraction(1, 2), 8, policy)
        assert all(graph.folner_quotient(g, t) < Fraction(1, 2) and graph.set_diameter(g, t) <= 8 for t in p.tiles)
        assert 0 <= cov <= 1


def test_packing_principle_rejects_zero_cap():
    with pytest.raises(GraphInputError):
        packing_principle(graph.cycle(5), range(5), Fraction(1, 2), 0)
