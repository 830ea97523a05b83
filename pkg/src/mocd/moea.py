"""NSGA-III (with duplicate and single-community filters) and MOEA/D-PBI.

Both optimizers evolve locus-based genotypes under one of the two
three-objective variants. All randomness flows through one numpy Generator
seeded from the run config, so a run is bit-reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from mocd import encoding, objectives
from mocd.graph import ValidationError

ALGORITHMS = ("NSGA3", "MOEAD")


@dataclass(frozen=True)
class RunConfig:
    variant: str
    algorithm: str
    population_size: int
    generations: int
    crossover_prob: float
    mutation_prob: float | None = None   # None resolves to 1/n at run time
    seed: int = 0
    alpha: float = 1.0
    r: float = 1.0
    moead_neighbors: int = 20
    pbi_theta: float = 5.0

    def __post_init__(self):
        if self.variant not in objectives.VARIANTS:
            raise ValidationError(f"unknown variant '{self.variant}'")
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm '{self.algorithm}'")
        if self.population_size < 4:
            raise ValidationError("population_size must be at least 4")
        if self.generations < 1:
            raise ValidationError("generations must be at least 1")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValidationError("crossover_prob outside [0, 1]")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValidationError("mutation_prob outside [0, 1]")
        if self.moead_neighbors < 2:
            raise ValidationError("moead_neighbors must be at least 2")


@dataclass
class RunResult:
    final_front: list          # (genes, Partition, ObjectiveVector) triples
    all_final_population: list
    history: list              # best raw Q per generation, index 0 = initial
    seed: int
    config: RunConfig
    wall_time: float = field(default=0.0, compare=False)

    def to_text(self):
        """Canonical byte-stable serialization; wall_time is excluded."""
        cfg = self.config
        lines = [
            "config "
            f"variant={cfg.variant} algorithm={cfg.algorithm} "
            f"population={cfg.population_size} generations={cfg.generations} "
            f"crossover={cfg.crossover_prob!r} mutation={cfg.mutation_prob!r} "
            f"seed={cfg.seed} alpha={cfg.alpha!r} r={cfg.r!r} "
            f"moead_neighbors={cfg.moead_neighbors} pbi_theta={cfg.pbi_theta!r}",
            "history " + " ".join(repr(q) for q in self.history),
        ]
        for tag, triples in (("front", self.final_front),
                             ("population", self.all_final_population)):
            for genes, part, ov in triples:
                lines.append(
                    f"{tag} genes=" + ",".join(str(int(g)) for g in genes)
                    + " assignment=" + ",".join(str(int(c)) for c in part.assignment)
                    + " values=" + ",".join(repr(float(v)) for v in ov.values)
                    + " raw=" + ",".join(repr(float(v)) for v in ov.raw)
                )
        return "\n".join(lines) + "\n"


def _points_array(points):
    rows = [p.values if isinstance(p, objectives.ObjectiveVector) else p for p in points]
    return np.asarray(rows, dtype=np.float64)


def fast_nondominated_sort(points):
    """Rank points into non-dominated fronts (minimize convention).

    Returns a list of index lists; front 0 is the non-dominated set.
    """
    pts = _points_array(points)
    s = pts.shape[0]
    if s == 0:
        return []
    le = np.all(pts[:, None, :] <= pts[None, :, :], axis=2)
    lt = np.any(pts[:, None, :] < pts[None, :, :], axis=2)
    dominates = le & lt
    n_dom = dominates.sum(axis=0).astype(np.int64)
    fronts = []
    current = np.nonzero(n_dom == 0)[0]
    while current.size:
        fronts.append([int(i) for i in current])
        n_dom[current] = -1
        n_dom -= dominates[current].sum(axis=0)
        current = np.nonzero(n_dom == 0)[0]
    return fronts


def das_dennis_reference_points(objectives_count, divisions):
    """Uniform simplex lattice with coordinates j/divisions summing to 1."""
    if objectives_count != 3:
        raise ValidationError("reference points are generated for 3 objectives")
    if divisions < 1:
        raise ValidationError("divisions must be at least 1")
    p = divisions
    pts = [(i, j, p - i - j) for i in range(p + 1) for j in range(p - i + 1)]
    return np.array(pts, dtype=np.float64) / p


def _divisions_for(population_size):
    # largest p with C(p+2, 2) <= N, never below 1
    p = 1
    while comb(p + 3, 2) <= population_size:
        p += 1
    return p


def _asf(translated, axis):
    # achievement scalarizing value along one axis direction
    w = np.full(3, 1e-6)
    w[axis] = 1.0
    return np.max(translated / w, axis=1)


def nsga3_environmental_selection(pool, refs, n_survive, rng):
    """Select n_survive members from an evaluated pool, NSGA-III style.

    Whole fronts are accepted while they fit; the splitting front is filled
    by normalized reference-direction niching with uniform random tie-breaks.
    Returns the selected pool indices.
    """
    pts = _points_array(pool)
    if pts.shape[0] < n_survive:
        raise ValidationError("pool smaller than the requested survivor count")
    fronts = fast_nondominated_sort(pts)
    chosen = []
    split = None
    for front in fronts:
        if len(chosen) + len(front) <= n_survive:
            chosen.extend(front)
            if len(chosen) == n_survive:
                return chosen
        else:
            split = front
            break
    considered = chosen + split
    sub = pts[considered]

    # normalize with ideal point and extreme-point intercepts
    ideal = sub.min(axis=0)
    translated = sub - ideal
    extremes = np.array([translated[np.argmin(_asf(translated, j))] for j in range(3)])
    intercepts = None
    try:
        plane = np.linalg.solve(extremes, np.ones(3))
        with np.errstate(divide="ignore", over="ignore"):
            cand = 1.0 / plane
        if np.all(np.isfinite(cand)) and np.all(cand > 1e-12):
            intercepts = cand
    except np.linalg.LinAlgError:
        pass
    if intercepts is None:
        intercepts = sub.max(axis=0) - ideal
        intercepts[intercepts <= 1e-12] = 1.0
    normalized = translated / intercepts

    # associate everyone with the nearest reference direction
    wnorm2 = np.sum(refs ** 2, axis=1)
    dots = normalized @ refs.T
    distsq = np.maximum(np.sum(normalized ** 2, axis=1)[:, None] - dots ** 2 / wnorm2, 0.0)
    assoc = np.argmin(distsq, axis=1)
    assoc_d = np.sqrt(distsq[np.arange(len(considered)), assoc])

    niche = np.zeros(len(refs), dtype=np.int64)
    for local in range(len(chosen)):
        niche[assoc[local]] += 1
    pending = {}
    for local in range(len(chosen), len(considered)):
        pending.setdefault(int(assoc[local]), []).append(local)

    available = np.full(len(refs), False)
    for ref_i in pending:
        available[ref_i] = True
    while len(chosen) < n_survive:
        mask = np.nonzero(available)[0]
        least = mask[niche[mask] == niche[mask].min()]
        ref_i = int(least[rng.integers(0, len(least))]) if len(least) > 1 else int(least[0])
        members = pending[ref_i]
        if niche[ref_i] == 0:
            pick = min(range(len(members)), key=lambda idx: assoc_d[members[idx]])
        else:
            pick = int(rng.integers(0, len(members)))
        local = members.pop(pick)
        chosen.append(considered[local])
        niche[ref_i] += 1
        if not members:
            del pending[ref_i]
            available[ref_i] = False
    return chosen


def _evaluate_pool(graph, variant, pool, alpha, r):
    triples = []
    for genes in pool:
        part = encoding.decode(graph, genes)
        triples.append((genes, part, objectives.evaluate_partition(variant, graph, part, alpha=alpha, r=r)))
    return triples


def modularity_refine(graph, partition, rng, max_sweeps=5):
    """Greedy single-node moves that raise modularity, returned as a genotype.

    Sweeps the nodes in random order; each node takes the neighboring
    community with the best positive modularity delta, if any. Stops after a
    sweep with no moves or after max_sweeps. The refined membership is
    re-encoded through a spanning forest, so the result is always feasible.
    """
    m = graph.edge_count
    if m == 0:
        return encoding.encode_partition(graph, partition.assignment)
    deg = graph.degrees.astype(np.float64)
    memb = partition.assignment.copy()
    degsum = np.bincount(memb, weights=deg, minlength=int(memb.max()) + 1)
    for _ in range(max_sweeps):
        moved = False
        for v in rng.permutation(graph.node_count):
            a = int(memb[v])
            links = {}
            for u in graph.adjacency[v]:
                cu = int(memb[u])
                links[cu] = links.get(cu, 0) + 1
            own = links.get(a, 0)
            best_delta, best_c = 0.0, -1
            for c, cnt in links.items():
                if c == a:
                    continue
                delta = (cnt - own) / m - deg[v] * (degsum[c] - degsum[a] + deg[v]) / (2.0 * m * m)
                if delta > best_delta + 1e-12:
                    best_delta, best_c = delta, c
            if best_c >= 0:
                degsum[a] -= deg[v]
                degsum[best_c] += deg[v]
                memb[v] = best_c
                moved = True
        if not moved:
            break
    return encoding.encode_partition(graph, memb)


def _make_offspring(population, p_c, p_m, graph, rng):
    n_pop = len(population)
    perm = rng.permutation(n_pop)
    offspring = []
    for i in range(0, n_pop - 1, 2):
        a, b = population[perm[i]], population[perm[i + 1]]
        if rng.random() < p_c:
            c1, c2 = encoding.uniform_crossover(a, b, rng)
        else:
            c1, c2 = a.copy(), b.copy()
        offspring.append(encoding.neighbor_mutation(graph, c1, p_m, rng))
        offspring.append(encoding.neighbor_mutation(graph, c2, p_m, rng))
    if len(offspring) < n_pop:
        # odd population: last parent mates with a random partner
        a = population[perm[-1]]
        b = population[int(rng.integers(0, n_pop))]
        if rng.random() < p_c:
            c1, _ = encoding.uniform_crossover(a, b, rng)
        else:
            c1 = a.copy()
        offspring.append(encoding.neighbor_mutation(graph, c1, p_m, rng))
    return offspring


def nsga3_run(graph, config, rng=None, observer=None):
    """Customized NSGA-III generational loop.

    Each generation merges parents and offspring, replaces duplicate-signature
    and single-community members, then applies environmental selection. One
    offspring slot per generation carries a modularity-refined copy of the
    current best-modularity parent; without that memetic step the search
    stalls just short of the best known partitions at these population sizes.
    The optional observer is called as observer(generation, survivor_triples)
    after every selection.
    """
    if config.algorithm != "NSGA3":
        raise ValidationError("config.algorithm must be NSGA3 for nsga3_run")
    start = time.perf_counter()
    if rng is None:
        rng = np.random.default_rng(config.seed)
    n_pop = config.population_size
    p_m = config.mutation_prob if config.mutation_prob is not None else 1.0 / graph.node_count
    refs = das_dennis_reference_points(3, _divisions_for(n_pop))

    population = [encoding.random_genotype(graph, rng) for _ in range(n_pop)]
    triples = _evaluate_pool(graph, config.variant, population, config.alpha, config.r)
    history = [max(t[2].raw[4] for t in triples)]

    for gen in range(config.generations):
        offspring = _make_offspring(population, config.crossover_prob, p_m, graph, rng)
        elite = max(triples, key=lambda t: t[2].raw[4])
        offspring[-1] = modularity_refine(graph, elite[1], rng)
        merged = encoding.dedupe_and_exclude(population + offspring, graph, rng)
        triples = _evaluate_pool(graph, config.variant, merged, config.alpha, config.r)
        survivors = nsga3_environmental_selection([t[2] for t in triples], refs, n_pop, rng)
        triples = [triples[i] for i in survivors]
        population = [t[0] for t in triples]
        history.append(max(t[2].raw[4] for t in triples))
        if observer is not None:
            observer(gen, triples)

    front_idx = fast_nondominated_sort([t[2] for t in triples])[0]
    return RunResult(
        final_front=[triples[i] for i in front_idx],
        all_final_population=triples,
        history=history,
        seed=config.seed,
        config=config,
        wall_time=time.perf_counter() - start,
    )


def pbi_scalarize(values, weight, ideal, theta):
    """Penalty boundary intersection: d1 + theta * d2 along a weight ray."""
    w = np.asarray(weight, dtype=np.float64)
    norm = np.linalg.norm(w)
    if norm <= 0:
        raise ValidationError("weight vector must be nonzero")
    diff = np.asarray(values, dtype=np.float64) - np.asarray(ideal, dtype=np.float64)
    d1 = abs(float(diff @ w)) / norm
    d2 = float(np.linalg.norm(diff - d1 * w / norm))
    return d1 + theta * d2


def _moead_weights(n_pop, rng):
    p = _divisions_for(n_pop)
    base = das_dennis_reference_points(3, p)
    if len(base) < n_pop:
        pad = rng.dirichlet(np.ones(3), size=n_pop - len(base))
        base = np.vstack([base, pad])
    return base[:n_pop]


def _exclude_single(graph, genes, rng):
    # single-community exclusion for a lone child
    if len(encoding.signature(graph, genes)) > 1 or graph.node_count < 2:
        return genes
    for _ in range(50):
        cand = encoding.random_genotype(graph, rng)
        if len(encoding.signature(graph, cand)) > 1:
            return cand
    return np.arange(graph.node_count, dtype=np.int64)


def _archive_add(archive, entry, signatures):
    genes, part, ov = entry
    if part.community_count < 2:
        return
    sig = part.signature
    if sig in signatures:
        return
    vals = ov.values
    keep = []
    for other in archive:
        ovals = other[2].values
        if np.all(ovals <= vals) and np.any(ovals < vals):
            return   # dominated by an archive member
        if not (np.all(vals <= ovals) and np.any(vals < ovals)):
            keep.append(other)
        else:
            signatures.discard(other[1].signature)
    keep.append(entry)
    signatures.add(sig)
    archive[:] = keep


def moead_run(graph, config, rng=None):
    """MOEA/D with PBI scalarization and an external non-dominated archive."""
    if config.algorithm != "MOEAD":
        raise ValidationError("config.algorithm must be MOEAD for moead_run")
    start = time.perf_counter()
    if rng is None:
        rng = np.random.default_rng(config.seed)
    n_pop = config.population_size
    p_m = config.mutation_prob if config.mutation_prob is not None else 1.0 / graph.node_count
    weights = _moead_weights(n_pop, rng)
    t_size = min(config.moead_neighbors, n_pop)
    dist = np.linalg.norm(weights[:, None, :] - weights[None, :, :], axis=2)
    neighbors = np.argsort(dist, axis=1, kind="stable")[:, :t_size]

    population = [encoding.random_genotype(graph, rng) for _ in range(n_pop)]
    triples = _evaluate_pool(graph, config.variant, population, config.alpha, config.r)
    ideal = np.min(np.array([t[2].values for t in triples]), axis=0)

    archive = []
    signatures = set()
    for t in triples:
        _archive_add(archive, t, signatures)
    history = [max(t[2].raw[4] for t in archive)] if archive else [max(t[2].raw[4] for t in triples)]

    for _gen in range(config.generations):
        for i in range(n_pop):
            pick = rng.choice(t_size, size=2, replace=False)
            a = triples[neighbors[i][pick[0]]][0]
            b = triples[neighbors[i][pick[1]]][0]
            if rng.random() < config.crossover_prob:
                child, _ = encoding.uniform_crossover(a, b, rng)
            else:
                child = a.copy()
            child = encoding.neighbor_mutation(graph, child, p_m, rng)
            child = _exclude_single(graph, child, rng)
            part = encoding.decode(graph, child)
            ov = objectives.evaluate_partition(config.variant, graph, part,
                                               alpha=config.alpha, r=config.r)
            ideal = np.minimum(ideal, ov.values)
            # replace at most 2 worsened neighbors
            replaced = 0
            for j in rng.permutation(neighbors[i]):
                if replaced >= 2:
                    break
                incumbent = triples[j][2].values
                if pbi_scalarize(ov.values, weights[j], ideal, config.pbi_theta) < \
                        pbi_scalarize(incumbent, weights[j], ideal, config.pbi_theta):
                    triples[j] = (child, part, ov)
                    replaced += 1
            _archive_add(archive, (child, part, ov), signatures)
        history.append(max(t[2].raw[4] for t in archive))

    return RunResult(
        final_front=list(archive),
        all_final_population=list(triples),
        history=history,
        seed=config.seed,
        config=config,
        wall_time=time.perf_counter() - start,
    )


def run(graph, config, rng=None, observer=None):
    """Dispatch on config.algorithm."""
    if config.algorithm == "NSGA3":
        return nsga3_run(graph, config, rng=rng, observer=observer)
    return moead_run(graph, config, rng=rng)
