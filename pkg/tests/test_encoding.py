import numpy as np
import pytest

from mocd.encoding import (decode, dedupe_and_exclude, encode_partition,
                           neighbor_mutation, random_genotype, signature,
                           uniform_crossover)
from mocd.graph import Graph, ValidationError


def random_graph(rng, n, p=0.3):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def components_oracle(graph, genes):
    # plain BFS over the undirected links {i, genes[i]}
    adj = {i: set() for i in range(graph.node_count)}
    for i, g in enumerate(genes):
        adj[i].add(int(g))
        adj[int(g)].add(i)
    seen = {}
    for start in range(graph.node_count):
        if start in seen:
            continue
        comp = len(set(seen.values()))
        stack = [start]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen[u] = comp
            stack.extend(adj[u] - seen.keys())
    return tuple(tuple(sorted(k for k, c in seen.items() if c == ci))
                 for ci in sorted(set(seen.values()),
                                  key=lambda c: min(k for k, v in seen.items() if v == c)))


def test_random_genotype_feasible():
    rng = np.random.default_rng(0)
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(2, 15)))
        genes = random_genotype(g, rng)
        for i, gene in enumerate(genes):
            assert gene == i or gene in g.adjacency[i]


def test_decode_matches_component_oracle():
    rng = np.random.default_rng(1)
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(2, 12)))
        genes = random_genotype(g, rng)
        part = decode(g, genes)
        assert part.signature == components_oracle(g, genes)


def test_decode_component_ids_by_smallest_member():
    g = Graph(4, [(0, 1), (2, 3)])
    part = decode(g, np.array([1, 1, 3, 3]))
    assert part.assignment.tolist() == [0, 0, 1, 1]


def test_decode_rejects_invalid_genes():
    g = Graph(3, [(0, 1)])
    with pytest.raises(ValidationError):
        decode(g, np.array([2, 1, 2]))    # 2 is not a neighbor of 0
    with pytest.raises(ValidationError):
        decode(g, np.array([0, 1]))       # wrong length


def test_uniform_crossover_positionwise():
    rng = np.random.default_rng(2)
    g = random_graph(rng, 12)
    a, b = random_genotype(g, rng), random_genotype(g, rng)
    c1, c2 = uniform_crossover(a, b, rng)
    for i in range(12):
        assert {c1[i], c2[i]} == {a[i], b[i]}


def test_neighbor_mutation_rate_extremes():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 10)
    genes = random_genotype(g, rng)
    assert np.array_equal(neighbor_mutation(g, genes, 0.0, rng), genes)
    mutated = neighbor_mutation(g, genes, 1.0, rng)
    for i, gene in enumerate(mutated):
        assert gene == i or gene in g.adjacency[i]
    with pytest.raises(ValidationError):
        neighbor_mutation(g, genes, 1.5, rng)


def test_signature_same_partition_same_signature():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    # different genotypes, same decoded partition {0,1} {2,3}
    assert signature(g, np.array([1, 0, 3, 2])) == signature(g, np.array([1, 1, 2, 2]))


def test_dedupe_and_exclude_contract():
    rng = np.random.default_rng(4)
    g = random_graph(rng, 10, p=0.4)
    base = random_genotype(g, rng)
    population = [base, base.copy(), np.arange(10, dtype=np.int64),
                  encode_partition(g, np.zeros(10, dtype=np.int64))]
    out = dedupe_and_exclude(population, g, rng)
    assert len(out) == len(population)
    assert out[0] is base                      # first holder kept
    sigs = [signature(g, genes) for genes in out]
    assert len(set(sigs)) == len(sigs)         # pairwise distinct
    assert all(len(s) >= 2 for s in sigs)      # no single-community member


def test_encode_partition_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(2, 14)))
        part = decode(g, random_genotype(g, rng))
        back = decode(g, encode_partition(g, part.assignment))
        assert back.signature == part.signature


def test_encode_partition_splits_disconnected_community():
    g = Graph(4, [(0, 1), (2, 3)])
    # nodes 0..3 forced into one community, which the graph cannot realize
    part = decode(g, encode_partition(g, np.zeros(4, dtype=np.int64)))
    assert part.signature == ((0, 1), (2, 3))


def test_encode_partition_validates_length():
    g = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValidationError):
        encode_partition(g, np.zeros(2, dtype=np.int64))
