"""The eleven acceptance criteria, each at its stated tolerance and runtime limit.

Every test prints one ``CRITERION k PASS|FAIL`` line (extra ``INFO`` lines
where a restricted variant is informative). Run ``python tests/test_acceptance.py``
for the lines alone.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

import pytest

from tiler import graph, harness, multipack, oracles, witness
from tiler.multipack import Multipacking
from tiler.packing import Packing

SEED = 2026
F = Fraction


def _emit(capsys, line: str) -> None:
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


def _verdict(capsys, k: int, ok: bool, detail: str, seconds: float, limit: float) -> bool:
    in_time = seconds < limit
    passed = ok and in_time
    _emit(capsys, f"CRITERION {k:2d} {'PASS' if passed else 'FAIL'}: {detail} [{seconds:.1f} s, limit {limit:.0f} s]")
    return passed


def _rows_ok(rep: harness.RunReport, prefix: str = "") -> tuple[bool, list[str]]:
    bad = [r.metric for r in rep.rows if r.passed is False and r.metric.startswith(prefix)]
    return not bad, bad


# ---------------------------------------------------------------- criteria


def criterion_1(capsys=None) -> bool:
    t = time.perf_counter()
    g = graph.cycle(1000)
    rep = witness.validate_witness(g, witness.uniform_ball_witness(g, 50))
    ok = rep.max_neighbor_l1 == F(2, 101) and rep.max_support_radius == 50 and rep.sums_ok and rep.passes
    return _verdict(capsys, 1, ok, f"C_1000 r=50: L1 = {rep.max_neighbor_l1}, radius {rep.max_support_radius}", time.perf_counter() - t, 5)


def criterion_2(capsys=None) -> bool:
    t = time.perf_counter()
    ok, parts, notes = True, [], []
    for m in (60, 120):
        for n in (4, 10):
            rep = harness.run_pipeline({"pipeline": "multipack", "graph": {"family": "cycle", "n": m}, "params": {"n": n, "samples": 10_000, "m": 0}, "seed": SEED})
            good, bad = _rows_ok(rep)
            ok &= good
            within = next(r.value for r in rep.rows if r.metric.startswith("edges with split"))
            worst = next(r.value for r in rep.rows if r.metric == "max split frequency")
            parts.append(f"C_{m} n={n}: within-3sigma {within}, max freq {worst:.4f} <= {F(2, 2 + n)}")
            zmax = next(r.value for r in rep.rows if r.metric == "max |z| over edges")
            zfw = next(r.value for r in rep.rows if r.metric == "family-wise 3-sigma z threshold")
            notes.append(f"C_{m} n={n} max |z| {zmax:.2f} vs {zfw:.2f}")
    ok = _verdict(capsys, 2, ok, "; ".join(parts), time.perf_counter() - t, 120)
    _emit(capsys, "INFO 2: family-wise (Bonferroni over edges) 3-sigma level: " + "; ".join(notes))
    return ok


def criterion_3(capsys=None) -> bool:
    t = time.perf_counter()
    ok, parts = True, []
    for spec, eps in (({"family": "cycle", "n": 60}, F(1, 2)), ({"family": "torus", "dim": 2, "sides": [12, 12]}, F(9, 10))):
        d = graph.generate(spec).degree_bound
        n = next(k for k in range(1, 1000) if eps > F(2 * d, k + 2))
        rep = harness.run_pipeline({"pipeline": "multipack", "graph": spec, "params": {"n": n, "epsilon": str(eps), "samples": 10_000, "m": 0}, "seed": SEED})
        mine = ("witness passes", "epsilon exceeds", "max per-vertex boundary")
        ok &= all(r.passed for r in rep.rows if r.metric.startswith(mine))
        worst = next(r.value for r in rep.rows if r.metric == "max per-vertex boundary frequency")
        parts.append(f"{spec['family']} eps={eps} n={n}: max boundary freq {worst:.4f}")
    return _verdict(capsys, 3, ok, "; ".join(parts), time.perf_counter() - t, 120)


def _random_covered_multipacking(rng: random.Random, gap: int):
    while True:
        g = oracles.random_graph(rng, 30)
        D = oracles.bf_distances(g)
        packs = [oracles._random_tiles(rng, g, D, 2, gap, 12) for _ in range(rng.randint(2, 6))]
        mp = Multipacking(tuple(Packing.of(p, g=g) for p in packs), g.n)
        if min(mp.coverage_counts()) > 0:
            return g, mp


def round_trip_violations(count: int, seed: int, gap: int) -> tuple[int, str]:
    rng = random.Random(seed)
    bad, example = 0, ""
    for _ in range(count):
        g, mp = _random_covered_multipacking(rng, gap)
        eps = multipack.tightness_defect(mp)
        l1 = witness.validate_witness(g, multipack.witness_from_multipacking(g, mp)).max_neighbor_l1
        if eps >= 1 or l1 > 2 * eps / (1 - eps):
            bad += 1
            example = example or f"n={g.n}, defect {eps}, L1 {l1}"
    return bad, example


def criterion_4(capsys=None) -> bool:
    t = time.perf_counter()
    bad, example = round_trip_violations(100, SEED, gap=0)
    ok = _verdict(capsys, 4, bad == 0, f"{bad}/100 random multipackings exceed 2eps/(1-eps)" + (f", e.g. {example}" if example else ""), time.perf_counter() - t, 60)
    sep, _ = round_trip_violations(100, SEED, gap=1)
    _emit(capsys, f"INFO 4: 1-separated packings: {sep}/100 exceed the bound")
    return ok


def criterion_5(capsys=None) -> bool:
    t = time.perf_counter()
    p1, p2 = oracles.shrink_lemma_sweep(200, SEED)
    join = oracles.join_lemma_sweep(200, SEED)
    ok = p1.passes and p2.passes and join.passes
    detail = (
        f"shrink separation/diameter {len(p1.failures)} failures, defect factor {len(p2.failures)} failures, "
        f"join 2r+t {len(join.failures)} failures (200 instances each)"
    )
    ok = _verdict(capsys, 5, ok, detail, time.perf_counter() - t, 60)
    _, s2 = oracles.shrink_lemma_sweep(200, SEED, gap=1)
    slack = oracles.join_lemma_sweep(200, SEED, slack=2)
    _emit(capsys, f"INFO 5: 1-separated packings: defect factor {len(s2.failures)} failures; join with bound 2r+t+2: {len(slack.failures)} failures")
    return ok


def criterion_6(capsys=None) -> bool:
    t = time.perf_counter()
    ok, parts = True, []
    for spec in ({"family": "cycle", "n": 200}, {"family": "torus", "dim": 2, "sides": [20, 20]}):
        for eps0 in ("1/2", "1/4"):
            rep = harness.run_pipeline({"pipeline": "quasitile", "graph": spec, "params": {"epsilon0": eps0}})
            good, bad = _rows_ok(rep)
            ok &= good
            cov = next(r.value for r in rep.rows if r.metric == "min probe coverage")
            tiles = next(r.value for r in rep.rows if r.metric.startswith("tiles are (eps0"))
            parts.append(f"{spec['family']} eps0={eps0}: {tiles} tiles, min coverage {cov}" + (f" FAILED {bad}" if bad else ""))
    return _verdict(capsys, 6, ok, "; ".join(parts), time.perf_counter() - t, 300)


def criterion_7(capsys=None) -> bool:
    t = time.perf_counter()
    rep = harness.run_pipeline({"pipeline": "ow-audit", "graph": {"family": "torus", "dim": 2, "sides": [24, 24]}, "params": {"epsilon": "1/2"}, "seed": SEED})
    ok, bad = _rows_ok(rep)
    mass = next((r.value for r in rep.rows if r.metric == "uncovered uniform mass"), None)
    return _verdict(capsys, 7, ok, f"torus 24x24 eps=1/2: uncovered mass {mass}" + (f", failed {bad}" if bad else ""), time.perf_counter() - t, 300)


def criterion_8(capsys=None) -> bool:
    t = time.perf_counter()
    rep = harness.run_pipeline({"pipeline": "cfw", "graph": {"family": "cycle", "n": 200}, "params": {"J_max": 4, "burn_in": 1}, "seed": SEED})
    ok, bad = _rows_ok(rep)
    asserted = sum(r.passed is not None for r in rep.rows)
    return _verdict(capsys, 8, ok, f"C_200 J_max=4: {asserted} schedule/coverage rows" + (f", failed {bad}" if bad else " all hold"), time.perf_counter() - t, 300)


def criterion_9(capsys=None) -> bool:
    t = time.perf_counter()
    rep = harness.run_pipeline({"pipeline": "cfw", "graph": {"family": "cycle", "n": 200}, "params": {"J_max": 4, "split_trials": 2000}, "seed": SEED})
    ok, bad = _rows_ok(rep, "max split frequency")
    freqs = [f"{r.value:.4f}" for r in rep.rows if r.metric.startswith("max split frequency level")]
    return _verdict(capsys, 9, ok and bool(freqs), f"C_200, 2000 seeds, worst per level {freqs}", time.perf_counter() - t, 180)


def criterion_10(capsys=None) -> bool:
    t = time.perf_counter()
    rep = harness.run_pipeline({"pipeline": "rank-partition", "graph": {"family": "cycle", "n": 100}, "params": {"r": 25, "epsilon": "1/3", "trials": 10_000, "alpha": "1/100"}, "seed": SEED})
    ok, bad = _rows_ok(rep)
    p = next(r.value for r in rep.rows if r.metric == "least chi-square p-value")
    worst = next(r.value for r in rep.rows if r.metric == "max split frequency")
    return _verdict(capsys, 10, ok, f"C_100 r=25 eps=1/3: least p-value {p:.4g}, max split {worst:.4f}", time.perf_counter() - t, 120)


def criterion_11(capsys=None) -> bool:
    t = time.perf_counter()
    rep = harness.run_pipeline({"pipeline": "oracle-suite"})
    ok, bad = _rows_ok(rep)
    total = sum(r.passed is not None for r in rep.rows)
    return _verdict(capsys, 11, ok, f"{total - len(bad)}/{total} examples match" + (f"; mismatched: {bad}" if bad else ""), time.perf_counter() - t, 120)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("k", range(1, 12), ids=[f"criterion_{k}" for k in range(1, 12)])
def test_criterion(k, capsys):
    assert CRITERIA[k - 1](capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
