from fractions import Fraction

import pytest

from tiler import graph, witness
from tiler.witness import WitnessFamily, WitnessInputError

F = Fraction


def test_l1_examples():
    p = {0: F(1, 2), 1: F(1, 2)}
    assert witness.l1_distance(p, p) == 0
    assert witness.l1_distance(p, {5: F(1)}) == 2
    u = {y: F(1, 5) for y in range(5)}
    v = {y: F(1, 5) for y in range(1, 6)}
    assert witness.l1_distance(u, v) == F(2, 5)
    with pytest.raises(WitnessInputError):
        witness.l1_distance({0: F(1, 2)}, p)


def test_zero_radius_is_point_mass():
    w = witness.uniform_ball_witness(graph.cycle(7), 0)
    assert all(p == {x: 1} for x, p in enumerate(w.dist))


@pytest.mark.parametrize("m,r", [(30, 3), (100, 10), (1000, 50), (9, 3)])
def test_arc_formula(m, r):
    rep = witness.validate_witness(graph.cycle(m), witness.uniform_ball_witness(graph.cycle(m), r))
    assert rep.max_neighbor_l1 == F(2, 2 * r + 1)
    assert rep.max_support_radius == r


def test_point_masses_and_single_vertex():
    g = graph.cycle(5)
    assert witness.validate_witness(g, witness.point_mass_witness(g)).max_neighbor_l1 == 2
    one = graph.empty(1)
    assert witness.validate_witness(one, witness.point_mass_witness(one)).max_neighbor_l1 == 0


def test_rationalize_examples():
    third = WitnessFamily(1, ({0: F(1, 3), 1: F(1, 3), 2: F(1, 3)},), 1)
    assert witness.rationalize(third, 3) == third
    w = WitnessFamily(1, ({0: F(1, 2), 1: F(3, 10), 2: F(1, 5)},), 1)
    assert witness.rationalize(w, 10).dist[0] == {0: F(5, 10), 1: F(3, 10), 2: F(2, 10)}
    assert witness.is_rationalized(witness.rationalize(w, 10), 10)


def test_rationalize_rejects_small_grid():
    w = WitnessFamily(1, ({0: F(1, 2), 1: F(1, 4), 2: F(1, 8), 3: F(1, 8)},), 1)
    with pytest.raises(WitnessInputError):
        witness.rationalize(w, 2)


def test_rationalized_weights_stay_normalized():
    w = WitnessFamily(1, ({0: F(1, 7), 1: F(2, 7), 2: F(4, 7)},), 1)
    r = witness.rationalize(w, 20)
    assert sum(r.dist[0].values()) == 1
    assert all((v * 20).denominator == 1 for v in r.dist[0].values())


def test_truncate_support():
    g = graph.cycle(100)
    pm = witness.point_mass_witness(g)
    assert witness.truncate_support(g, pm, 4, F(1, 2)) == {4}
    w = witness.uniform_ball_witness(g, 5)
    # mass of the radius-r arc is (2r+1)/11; the threshold 1 - eps/3 = 10/11 first holds at r = 5
    assert witness.truncate_support(g, w, 0, F(3, 11)) == graph.ball(g, 0, 5)
    assert witness.truncate_support(g, w, 0, F(3)) == {0}


def test_negative_weight_rejected():
    with pytest.raises(WitnessInputError):
        WitnessFamily(1, ({0: F(-1, 2), 1: F(3, 2)},), 1)


def test_witness_file_round_trip(tmp_path):
    g = graph.cycle(8)
    w = witness.uniform_ball_witness(g, 2, 3)
    witness.write_witness(w, tmp_path / "w.txt")
    back = witness.read_witness(tmp_path / "w.txt", g.n)
    assert back.dist == w.dist
