"""End-to-end acceptance checks.

Each test prints one `[criterion NN] PASS/FAIL` line with the measured
numbers, then asserts. Criteria 1-4 exercise the full optimizer on the
bundled datasets and carry the bulk of the runtime.
"""

import time

import numpy as np
import pytest

from mocd import data
from mocd.encoding import random_genotype
from mocd.graph import Graph, Partition, load_gml
from mocd.harness import ExperimentSpec, sweep
from mocd.metrics import hv_igd_ratio, hypervolume, igd, nmi
from mocd.moea import RunConfig, fast_nondominated_sort, nsga3_run
from mocd.objectives import (community_fitness, community_score, kernel_kmeans,
                             modularity, ratio_cut)

from test_metrics import mc_hypervolume
from test_moea import brute_force_fronts
from test_objectives import naive_objectives, set_partitions

Q_TARGETS = {"karate": 0.4198, "dolphins": 0.52, "football": 0.58, "polbooks": 0.50}


def _line(num, ok, detail):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def _max_q(result):
    return max(t[2].raw[4] for t in result.final_front)


@pytest.fixture(scope="session")
def karate():
    return load_gml(data.path("karate").read_text())


@pytest.fixture(scope="session")
def karate_runs(karate):
    graph, _ = karate
    start = time.perf_counter()
    results = [nsga3_run(graph, RunConfig("KRM", "NSGA3", 100, 100, 0.8, 1 / 34,
                                          seed=seed))
               for seed in range(10)]
    return results, time.perf_counter() - start


def test_criterion_01_karate_modularity(karate_runs):
    results, elapsed = karate_runs
    hits = sum(_max_q(r) >= Q_TARGETS["karate"] - 1e-4 for r in results)
    ok = hits >= 8 and elapsed < 120.0
    assert _line(1, ok, f"karate KRM max Q >= 0.4197: {hits}/10 runs, "
                        f"{elapsed:.0f}s (need >=8 within 120s)")


def test_criterion_02_karate_nmi(karate, karate_runs):
    _, truth = karate
    results, _ = karate_runs
    hits = sum(any(nmi(t[1], truth) == 1.0 for t in r.final_front) for r in results)
    assert _line(2, hits >= 1, f"karate runs with an exact NMI=1.0 front member: "
                               f"{hits}/10 (need >=1)")


def test_criterion_03_dolphins_modularity():
    graph, _ = load_gml(data.path("dolphins").read_text())
    start = time.perf_counter()
    hits = 0
    for seed in range(10):
        result = nsga3_run(graph, RunConfig("KRM", "NSGA3", 200, 100, 0.85, 1 / 62,
                                            seed=seed))
        hits += _max_q(result) >= Q_TARGETS["dolphins"]
    elapsed = time.perf_counter() - start
    ok = hits >= 5 and elapsed < 600.0
    assert _line(3, ok, f"dolphins KRM max Q >= 0.52: {hits}/10 runs, "
                        f"{elapsed:.0f}s (need >=5 within 600s)")


def test_criterion_04_football_polbooks_smoke():
    hits = {}
    for name in ("football", "polbooks"):
        graph, _ = load_gml(data.path(name).read_text())
        hits[name] = 0
        for seed in range(10):
            result = nsga3_run(graph, RunConfig("KRM", "NSGA3", 200, 100, 0.9,
                                                seed=seed))
            hits[name] += _max_q(result) >= Q_TARGETS[name]
    ok = hits["football"] >= 3 and hits["polbooks"] >= 3
    assert _line(4, ok, f"football max Q >= 0.58: {hits['football']}/10, "
                        f"polbooks max Q >= 0.50: {hits['polbooks']}/10 (need >=3 each)")


def test_criterion_05_single_community_identities():
    rng = np.random.default_rng(50)
    bad = 0
    for _ in range(100):
        n = int(rng.integers(2, 31))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.25]
        if not edges:
            edges = [(0, 1)]
        graph = Graph(n, edges)
        whole = Partition(np.zeros(n, dtype=np.int64))
        if modularity(graph, whole) != 0.0 or ratio_cut(graph, whole) != 0.0:
            bad += 1
    assert _line(5, bad == 0, f"graphs where Q(k=1) or RC(k=1) deviates from 0: "
                              f"{bad}/100 (need 0, exact)")


def test_criterion_06_objective_oracle_equivalence():
    rng = np.random.default_rng(60)
    worst = 0.0
    checked = 0
    for _ in range(20):
        n = int(rng.integers(3, 8))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.5]
        if not edges:
            edges = [(0, 1)]
        graph = Graph(n, edges)
        for assign in set_partitions(n):
            part = Partition(np.array(assign))
            expected = naive_objectives(graph, np.array(assign))
            got = (kernel_kmeans(graph, part), ratio_cut(graph, part),
                   community_fitness(graph, part), community_score(graph, part),
                   modularity(graph, part))
            worst = max(worst, max(abs(g - e) for g, e in zip(got, expected)))
            checked += 1
    assert _line(6, worst <= 1e-12, f"all five objectives vs naive oracle over "
                                    f"{checked} partitions: worst |diff| = {worst:.2e} "
                                    f"(need <= 1e-12)")


def test_criterion_07_dominance_sort_oracle():
    rng = np.random.default_rng(70)
    mismatches = 0
    for _ in range(200):
        pts = rng.integers(0, 8, size=(int(rng.integers(1, 51)), 3)).astype(float)
        got = [sorted(f) for f in fast_nondominated_sort(pts)]
        if got != brute_force_fronts(pts):
            mismatches += 1
    assert _line(7, mismatches == 0, f"fast sort vs brute force on 200 point sets: "
                                     f"{mismatches} mismatches (need 0)")


def test_criterion_08_hypervolume_correctness():
    closed_ok = (hypervolume([[1.0, 2.0, 3.0]], [0, 0, 0]) == pytest.approx(6.0, abs=1e-12)
                 and hypervolume([[1.0, 2.0, 1.0], [2.0, 1.0, 1.0]], [0, 0, 0])
                 == pytest.approx(3.0, abs=1e-12))
    rng = np.random.default_rng(80)
    misses = 0
    for i in range(100):
        front = rng.random((int(rng.integers(1, 11)), 3)) + 0.1
        exact = hypervolume(front, [0.0, 0.0, 0.0])
        estimate, sigma = mc_hypervolume(front, [0.0, 0.0, 0.0],
                                         n_samples=1_000_000, seed=i)
        if abs(exact - estimate) > 3.0 * max(sigma, 1e-12):
            misses += 1
    ok = closed_ok and misses == 0
    assert _line(8, ok, f"exact HV vs 1e6-sample Monte-Carlo on 100 fronts: "
                        f"{misses} beyond 3 sigma; closed forms exact: {closed_ok}")


def test_criterion_09_nmi_properties():
    rng = np.random.default_rng(90)
    bad = 0
    for _ in range(500):
        n = int(rng.integers(2, 40))
        a = Partition(np.unique(rng.integers(0, int(rng.integers(1, 6)), n),
                                return_inverse=True)[1])
        b = Partition(np.unique(rng.integers(0, int(rng.integers(1, 6)), n),
                                return_inverse=True)[1])
        v = nmi(a, b)
        if abs(v - nmi(b, a)) > 1e-12 or not (-1e-9 <= v <= 1.0 + 1e-9):
            bad += 1
        if nmi(a, a) != 1.0:
            bad += 1
        if a.community_count >= 2 and nmi(a, Partition(np.zeros(n, dtype=np.int64))) != 0.0:
            bad += 1
    assert _line(9, bad == 0, f"NMI symmetry/range/identity/single-cluster over "
                              f"500 pairs: {bad} violations (need 0)")


def test_criterion_10_filter_contract(karate):
    graph, _ = karate
    violations = []

    def observer(gen, triples):
        sigs = [t[1].signature for t in triples]
        if len(set(sigs)) != len(sigs):
            violations.append((gen, "duplicate signature"))
        if any(t[1].community_count < 2 for t in triples):
            violations.append((gen, "single community"))

    nsga3_run(graph, RunConfig("KRM", "NSGA3", 100, 100, 0.8, 1 / 34, seed=0),
              observer=observer)
    assert _line(10, not violations,
                 f"instrumented karate run, 100 generations: "
                 f"{len(violations)} filter violations (need 0)")


def test_criterion_11_sweep_determinism(tmp_path):
    spec = ExperimentSpec("karate", "KRM", population_sizes=(16, 20),
                          crossover_probs=(0.8,), mutation_probs=(None,),
                          generations=(8,), runs_per_combo=2)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    sweep(spec, out_dir=out_a)
    sweep(spec, out_dir=out_b)
    names_a = sorted(p.name for p in out_a.iterdir())
    names_b = sorted(p.name for p in out_b.iterdir())
    identical = names_a == names_b and all(
        (out_a / n).read_bytes() == (out_b / n).read_bytes() for n in names_a)
    assert _line(11, identical, f"two identical sweeps, {len(names_a)} report files: "
                                f"byte-identical = {identical}")


def test_criterion_12_hv_igd_ratio_monotonicity():
    # the published ratio magnitudes rest on an unstated scaling, so the gate
    # is the monotonicity property, not numeric reproduction
    rng = np.random.default_rng(120)
    violations = 0
    for _ in range(50):
        front = rng.random((int(rng.integers(1, 8)), 3))
        reference = rng.random((int(rng.integers(2, 8)), 3))
        ref_point = np.full(3, 2.0)
        base = hv_igd_ratio(front, reference, reference_point=ref_point)
        extra = front.min(axis=0) - rng.random(3) * 0.05   # dominates in minimize
        better = np.vstack([front, extra])
        improved = hv_igd_ratio(better, reference, reference_point=ref_point)
        if improved < base - 1e-12:
            violations += 1
    assert _line(12, violations == 0,
                 f"ratio non-decrease after adding a dominating point, 50 trials: "
                 f"{violations} violations (need 0); absolute magnitudes "
                 f"declared not reproducible")
