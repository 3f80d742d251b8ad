from fractions import Fraction

import pytest

from tiler import graph, packing, quasitile
from tiler.packing import Packing
from tiler.quasitile import QuasiTileConfig

F = Fraction


def _cfg(eps0=F(1, 2), k0=6, k1=6):
    return QuasiTileConfig(eps0, 2, k0, k1, eps0, eps0)


def test_config_rejects_bad_epsilon():
    with pytest.raises(quasitile.QuasiTileInputError):
        quasitile.derive_constants(graph.cycle(10), F(1))
    with pytest.raises(quasitile.QuasiTileInputError):
        _cfg(F(3, 2))


def test_single_vertex_constants():
    cfg = quasitile.derive_constants(graph.empty(1), F(1, 2))
    assert cfg.k0 == 0 and cfg.k1 == 0


def test_cycle_calibration_log_is_consistent():
    g = graph.cycle(200)
    cfg = quasitile.derive_constants(g, F(1, 2))
    rows = [r for r in cfg.calibration if r.epsilon == F(1, 6)]
    best = max(rows, key=lambda r: (r.delta, -r.k))
    assert best.k == cfg.k0 and best.delta > 0
    # a 1/6-Følner arc has at least 13 vertices, so tiles are at least that wide
    assert cfg.k0 >= 12


def test_mediators_for_singletons_are_color_classes():
    g = graph.cycle(6)
    fam = quasitile.build_mediators(g, _cfg(k1=0), [{v} for v in range(6)])
    assert sorted(len(m.tiles) for m in fam.mediators) == [3, 3]
    assert sorted(t for m in fam.mediators for t in m.tiles) == [(v,) for v in range(6)]


def test_mediators_contain_every_arc():
    g = graph.cycle(30)
    arcs = [frozenset((i + j) % 30 for j in range(5)) for i in range(30)]
    fam = quasitile.build_mediators(g, _cfg(k0=4, k1=4), arcs)
    tiles = {frozenset(t) for m in fam.mediators for t in m.tiles}
    assert set(arcs) <= tiles
    for m in fam.mediators:
        assert packing.validate_packing(g, m)


def test_empty_candidates_and_budget():
    g = graph.cycle(30)
    assert quasitile.build_mediators(g, _cfg(), []).mediators == ()
    tight = QuasiTileConfig(F(1, 2), 1, 4, 4, F(1, 2), F(1, 2), mediator_budget=2)
    arcs = [frozenset((i + j) % 30 for j in range(5)) for i in range(30)]
    with pytest.raises(quasitile.MediatorBudgetError):
        quasitile.build_mediators(g, tight, arcs)


def test_improve_tile_covered_is_noop():
    g = graph.path(20)
    f = Packing.of([range(5), range(5, 10)], 6)
    out, did = quasitile.improve_tile(g, f, range(10), _cfg())
    assert out == f and not did


def test_improve_tile_repacks_empty_region():
    g = graph.path(20)
    out, did = quasitile.improve_tile(g, Packing.empty(), range(10), _cfg())
    assert did and packing.restrict_inside(out, range(10)) == frozenset(range(10))
    assert all(graph.folner_quotient(g, t) < F(1, 2) and graph.set_diameter(g, t) <= 6 for t in out.tiles)


def test_improve_tile_fails_when_crossed():
    g = graph.path(20)
    f = Packing.of([range(0, 12)], 11)
    with pytest.raises(quasitile.ImprovementFailed):
        quasitile.improve_tile(g, f, range(10), _cfg(k0=11, k1=11))


def test_quasi_tile_whole_cycle():
    g = graph.cycle(9)
    cfg = quasitile.derive_constants(g, F(1, 2))
    T, trace = quasitile.quasi_tile(g, F(1, 2), None, cfg)
    assert T.tiles == (tuple(range(9)),)
    assert trace.ledger_ok and trace.steps_valid


def test_quasi_tile_empty_graph():
    g = graph.empty(0)
    T, trace = quasitile.quasi_tile(g, F(1, 2), None, quasitile.derive_constants(g, F(1, 2)))
    assert T.tiles == () and trace.steps == []


def test_quasi_tile_epsilon_must_match_config():
    g = graph.cycle(9)
    with pytest.raises(quasitile.QuasiTileInputError):
        quasitile.quasi_tile(g, F(1, 3), None, quasitile.derive_constants(g, F(1, 2)))


def test_coverage_report_examples(c12):
    halves = Packing.of([range(6), range(6, 12)], 5)
    assert quasitile.coverage_report(c12, halves, [range(12)]) == [1]
    assert quasitile.coverage_report(c12, Packing.empty(), [range(3), range(5)]) == [0, 0]
    t = Packing.of([range(1, 5), range(7, 11)], 3)
    assert quasitile.coverage_report(c12, t, [range(6)]) == [F(4, 6)]
    assert quasitile.coverage_report(c12, t, [[]]) == [None]


def test_markers():
    assert quasitile.choose_markers(Packing.of([range(30)], 29), F(1, 2)) == {0, 1}
    with pytest.raises(quasitile.MarkerError) as err:
        quasitile.choose_markers(Packing.of([range(10)], 9), F(1, 2))
    assert set(err.value.witness) == set(range(10))


def test_small_component_is_carved_out():
    g = graph.cycle(15)
    P, audit = quasitile.ow_packing(g, F(1, 2))
    assert P.tiles == (tuple(range(15)),)
    assert audit.uncovered_mass == 0 and audit.carved == 1


def test_ow_torus_audit():
    g = graph.torus(2, [24, 24])
    P, audit = quasitile.ow_packing(g, F(1, 2), seed=2026)
    assert audit.passes
    assert audit.uncovered_mass == F(g.n - len(packing.covered_set(P)), g.n) <= F(1, 2)
