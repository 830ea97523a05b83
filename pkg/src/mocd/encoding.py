"""Locus-based genotype encoding and variation operators.

A genotype is an integer array of length n where genes[i] is either i or a
neighbor of i. Decoding treats each pair {i, genes[i]} as an undirected link
and reads communities off the connected components, so every genotype decodes
to a valid partition and crossover/mutation stay feasible by construction.
"""

from __future__ import annotations

import numpy as np

from mocd.graph import Partition, ValidationError


def _locus_tables(graph):
    # per-node candidate genes: column 0 is the self-link, then neighbors,
    # padded with the self value so any row index < degree+1 is legal
    cached = getattr(graph, "_locus_tables", None)
    if cached is None:
        n = graph.node_count
        width = int(graph.degrees.max(initial=0)) + 1
        table = np.tile(np.arange(n, dtype=np.int64)[:, None], (1, width))
        for i, neigh in enumerate(graph.adjacency):
            table[i, 1:1 + len(neigh)] = neigh
        valid = np.unique(np.arange(n, dtype=np.int64)[:, None] * n + table)
        graph._locus_tables = (table, graph.degrees + 1, valid)
        cached = graph._locus_tables
    return cached


def random_genotype(graph, rng):
    """Draw each gene uniformly from {i} union adj(i)."""
    table, highs, _ = _locus_tables(graph)
    picks = rng.integers(0, highs)
    return table[np.arange(graph.node_count), picks]


def decode(graph, genes):
    """Connected components of the links {i, genes[i]}, as a Partition.

    Component ids follow the order of each component's smallest member.
    """
    genes = np.asarray(genes, dtype=np.int64)
    n = graph.node_count
    if genes.shape != (n,):
        raise ValidationError(f"genotype length {genes.shape} does not match n={n}")
    _, _, valid = _locus_tables(graph)
    keys = np.arange(n, dtype=np.int64) * n + genes
    ok = np.searchsorted(valid, keys)
    if not np.all(valid[np.minimum(ok, len(valid) - 1)] == keys):
        bad = int(np.nonzero(valid[np.minimum(ok, len(valid) - 1)] != keys)[0][0])
        raise ValidationError(f"gene {bad} -> {int(genes[bad])} is not self or a neighbor")

    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for i, g in enumerate(genes):
        ri, rg = find(i), find(int(g))
        if ri != rg:
            # keep the smaller root so component ids come out by smallest member
            if ri < rg:
                parent[rg] = ri
            else:
                parent[ri] = rg
    assignment = np.empty(n, dtype=np.int64)
    remap = {}
    for i in range(n):
        r = find(i)
        assignment[i] = remap.setdefault(r, len(remap))
    return Partition(assignment)


def encode_partition(graph, membership):
    """Genotype whose decode reproduces the given node-to-community map.

    Each community gets a BFS spanning forest over its induced subgraph: the
    root points to itself and every other member points to its BFS parent, so
    all genes stay in {i} union adj(i). A community whose induced subgraph is
    disconnected decodes as its connected pieces. Deterministic.
    """
    membership = np.asarray(membership, dtype=np.int64)
    n = graph.node_count
    if membership.shape != (n,):
        raise ValidationError(f"membership length {membership.shape} does not match n={n}")
    genes = np.arange(n, dtype=np.int64)
    groups = {}
    for v in range(n):
        groups.setdefault(int(membership[v]), []).append(v)
    for label in sorted(groups, key=lambda c: groups[c][0]):
        members = set(groups[label])
        seen = set()
        for start in groups[label]:
            if start in seen:
                continue
            seen.add(start)
            queue = [start]
            head = 0
            while head < len(queue):
                u = queue[head]
                head += 1
                for w in graph.adjacency[u]:
                    w = int(w)
                    if w in members and w not in seen:
                        seen.add(w)
                        genes[w] = u
                        queue.append(w)
    return genes


def uniform_crossover(a, b, rng):
    """Swap genes between two parents with per-position probability 1/2."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise ValidationError("parents have different lengths")
    mask = rng.random(a.shape[0]) < 0.5
    return np.where(mask, a, b), np.where(mask, b, a)


def neighbor_mutation(graph, genes, p_m, rng):
    """Resample each gene from {i} union adj(i) with probability p_m."""
    if not 0.0 <= p_m <= 1.0:
        raise ValidationError(f"mutation rate {p_m} outside [0, 1]")
    genes = np.asarray(genes, dtype=np.int64)
    table, highs, _ = _locus_tables(graph)
    mask = rng.random(graph.node_count) < p_m
    picks = rng.integers(0, highs)
    return np.where(mask, table[np.arange(graph.node_count), picks], genes)


def signature(graph, genes):
    """Canonical, relabeling-invariant form of the decoded partition."""
    return decode(graph, genes).signature


def dedupe_and_exclude(population, graph, rng):
    """Replace duplicate-signature and single-community members.

    The first holder of each signature is kept; later holders and any member
    decoding to one community are replaced by fresh random genotypes, re-checked
    against the same rules. After 50 failed resamples a slot falls back to the
    all-self genotype (n singletons); if even that signature is taken, single
    genes are redirected to a neighbor until the signature is unique or 50
    attempts pass, at which point the all-self genotype stands as-is.
    """
    n = graph.node_count
    min_k = 2 if n >= 2 else 1
    seen = set()
    out = []
    for genes in population:
        sig = signature(graph, genes)
        if sig not in seen and len(sig) >= min_k:
            seen.add(sig)
            out.append(genes)
            continue
        chosen = None
        for _ in range(50):
            cand = random_genotype(graph, rng)
            csig = signature(graph, cand)
            if csig not in seen and len(csig) >= min_k:
                chosen = (cand, csig)
                break
        if chosen is None:
            cand = np.arange(n, dtype=np.int64)
            csig = signature(graph, cand)
            if csig in seen:
                for _ in range(50):
                    trial = cand.copy()
                    i = int(rng.integers(0, n))
                    if graph.degrees[i] == 0:
                        continue
                    trial[i] = graph.adjacency[i][int(rng.integers(0, graph.degrees[i]))]
                    tsig = signature(graph, trial)
                    if tsig not in seen:
                        cand, csig = trial, tsig
                        break
            chosen = (cand, csig)
        seen.add(chosen[1])
        out.append(chosen[0])
    return out
