"""The five community-quality objectives and the two 3-objective bundles.

KRM bundles (kernel k-means, ratio cut, modularity), CCM bundles (community
fitness, community score, modularity). Internally every bundle is stored in
all-minimize form, so maximized objectives enter negated; the raw signed
5-tuple (KKM, RC, CF, CS, Q) is kept alongside for reporting.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from mocd import encoding
from mocd.graph import ValidationError

VARIANTS = ("KRM", "CCM")


class ObjectiveVector(NamedTuple):
    variant: str
    values: np.ndarray   # 3 internal minimize-form values
    raw: tuple           # (KKM, RC, CF, CS, Q)


def _community_stats(graph, p):
    # intra edge counts (unordered), degree sums, sizes, per-node internal degree
    c = p.assignment
    k = p.community_count
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    same = c[u] == c[v]
    intra = np.bincount(c[u[same]], minlength=k).astype(np.float64)
    sizes = np.bincount(c, minlength=k).astype(np.float64)
    degsum = np.bincount(c, weights=graph.degrees, minlength=k)
    kin = np.zeros(graph.node_count, dtype=np.float64)
    np.add.at(kin, u[same], 1.0)
    np.add.at(kin, v[same], 1.0)
    return c, k, intra, sizes, degsum, kin


def kernel_kmeans(graph, p):
    """2(n - k) - sum_s L(V_s, V_s)/|V_s|, internal links as ordered pairs."""
    _, k, intra, sizes, _, _ = _community_stats(graph, p)
    return 2.0 * (graph.node_count - k) - float(np.sum(2.0 * intra / sizes))


def ratio_cut(graph, p):
    """sum_s L(V_s, complement)/|V_s|."""
    _, _, intra, sizes, degsum, _ = _community_stats(graph, p)
    cut = degsum - 2.0 * intra
    return float(np.sum(cut / sizes))


def community_fitness(graph, p, alpha=1.0):
    """sum over nodes of k_in / (k_in + k_out)^alpha; 0/0 counts as 0."""
    if alpha <= 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    _, _, _, _, _, kin = _community_stats(graph, p)
    deg = graph.degrees.astype(np.float64)
    out = np.zeros_like(kin)
    np.divide(kin, deg ** alpha, out=out, where=deg > 0)
    return float(np.sum(out))


def community_score(graph, p, r=1.0):
    """sum_s M(s) * V_s with M(s) the mean of (k_in/|s|)^r and V_s = 2 * l_s."""
    if r <= 0:
        raise ValidationError(f"r must be positive, got {r}")
    c, k, intra, sizes, _, kin = _community_stats(graph, p)
    mu_r = (kin / sizes[c]) ** r
    m_s = np.bincount(c, weights=mu_r, minlength=k) / sizes
    return float(np.sum(m_s * 2.0 * intra))


def modularity(graph, p):
    """sum_s [l_s/m - (d_s/2m)^2]."""
    if graph.edge_count == 0:
        raise ValidationError("modularity undefined on a graph with no edges")
    _, _, intra, _, degsum, _ = _community_stats(graph, p)
    m = float(graph.edge_count)
    return float(np.sum(intra / m - (degsum / (2.0 * m)) ** 2))


def evaluate_partition(variant, graph, p, alpha=1.0, r=1.0):
    """All five objectives for a decoded partition, bundled per variant."""
    if variant not in VARIANTS:
        raise ValidationError(f"unknown variant '{variant}', expected one of {VARIANTS}")
    if graph.edge_count == 0:
        raise ValidationError("modularity undefined on a graph with no edges")
    c, k, intra, sizes, degsum, kin = _community_stats(graph, p)
    n = graph.node_count
    m = float(graph.edge_count)
    deg = graph.degrees.astype(np.float64)

    kkm = 2.0 * (n - k) - float(np.sum(2.0 * intra / sizes))
    rc = float(np.sum((degsum - 2.0 * intra) / sizes))
    with np.errstate(invalid="ignore"):
        frac = np.zeros(n, dtype=np.float64)
        np.divide(kin, deg ** alpha, out=frac, where=deg > 0)
    cf = float(np.sum(frac))
    mu_r = (kin / sizes[c]) ** r
    cs = float(np.sum(np.bincount(c, weights=mu_r, minlength=k) / sizes * 2.0 * intra))
    q = float(np.sum(intra / m - (degsum / (2.0 * m)) ** 2))

    if variant == "KRM":
        values = np.array([kkm, rc, -q])
    else:
        values = np.array([-cf, -cs, -q])
    return ObjectiveVector(variant, values, (kkm, rc, cf, cs, q))


def evaluate(variant, graph, genes, alpha=1.0, r=1.0):
    """Decode a genotype once and evaluate it under the given variant."""
    return evaluate_partition(variant, graph, encoding.decode(graph, genes), alpha=alpha, r=r)
