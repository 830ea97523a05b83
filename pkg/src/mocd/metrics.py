"""Partition and front quality measures: NMI, IGD, hypervolume, HV/IGD.

Fronts are handled in minimize convention everywhere except hypervolume(),
which works in maximize orientation; hv_igd_ratio() performs the nadir
transform between the two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mocd import moea
from mocd.graph import ValidationError


def _assignment(p):
    return np.asarray(getattr(p, "assignment", p), dtype=np.int64)


def nmi(a, b):
    """Normalized mutual information between two partitions, in [0, 1].

    Natural logarithm; 0*log0 terms drop out. Two all-nodes single clusters
    compare as identical (1.0). No clamping is applied.
    """
    a = _assignment(a)
    b = _assignment(b)
    if a.shape != b.shape:
        raise ValidationError("partitions cover different node sets")
    n = a.shape[0]
    if n == 0:
        raise ValidationError("empty partitions")
    conf = np.zeros((int(a.max()) + 1, int(b.max()) + 1), dtype=np.float64)
    np.add.at(conf, (a, b), 1.0)
    if np.all(np.count_nonzero(conf, axis=0) == 1) and \
            np.all(np.count_nonzero(conf, axis=1) == 1):
        return 1.0   # identical structures up to relabeling, exactly 1
    rows = conf.sum(axis=1)
    cols = conf.sum(axis=0)
    # keep raw counts inside the logs: n*n_ij and row_i*col_j are exact in
    # float64, so a single-cluster partner cancels to exactly 0
    mask = conf > 0
    mi = float(np.sum(conf[mask] / n
                      * np.log(n * conf[mask] / np.outer(rows, cols)[mask])))
    ha = float(np.sum(rows[rows > 0] / n * np.log(n / rows[rows > 0])))
    hb = float(np.sum(cols[cols > 0] / n * np.log(n / cols[cols > 0])))
    if ha == 0.0 and hb == 0.0:
        return 1.0
    return float(2.0 * mi / (ha + hb)) + 0.0


def igd(front, reference):
    """Mean distance from each reference point to its nearest front point."""
    front = np.asarray(front, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    if front.size == 0 or reference.size == 0:
        raise ValidationError("IGD needs a nonempty front and reference")
    if front.ndim != 2 or reference.ndim != 2 or front.shape[1] != reference.shape[1]:
        raise ValidationError("front and reference dimensions disagree")
    d = np.sqrt(np.sum((reference[:, None, :] - front[None, :, :]) ** 2, axis=2))
    return float(d.min(axis=1).mean())


def _staircase_insert(stairs, x, y):
    # stairs: x ascending, y descending, mutually non-dominated (maximize)
    lo, hi = 0, len(stairs)
    while lo < hi:
        mid = (lo + hi) // 2
        if stairs[mid][0] < x:
            lo = mid + 1
        else:
            hi = mid
    if lo < len(stairs) and stairs[lo][0] == x:
        if stairs[lo][1] >= y:
            return stairs
        stairs = stairs[:lo] + stairs[lo + 1:]
    elif lo < len(stairs) and stairs[lo][1] >= y:
        return stairs   # dominated by a point with larger x
    j = lo
    while j > 0 and stairs[j - 1][1] <= y:
        j -= 1          # drop members the new point dominates
    return stairs[:j] + [(x, y)] + stairs[lo:]


def _staircase_area(stairs):
    area = 0.0
    prev_x = 0.0
    for x, y in stairs:
        area += (x - prev_x) * y
        prev_x = x
    return area


def hypervolume(front, reference_point):
    """Exact 3-D hypervolume in maximize orientation.

    Measures the union of boxes [reference_point, point]. Points that do not
    dominate the reference contribute nothing and are skipped.
    """
    front = np.asarray(front, dtype=np.float64)
    if front.ndim != 2 or front.shape[1] != 3:
        raise ValidationError("hypervolume expects an (n, 3) front")
    ref = np.asarray(reference_point, dtype=np.float64)
    if ref.shape != (3,):
        raise ValidationError("reference point must have 3 components")
    pts = front - ref
    pts = pts[np.all(pts > 0, axis=1)]
    if pts.shape[0] == 0:
        return 0.0
    order = np.lexsort((pts[:, 0], pts[:, 1], -pts[:, 2]))
    pts = pts[order]
    stairs = []
    volume = 0.0
    area = 0.0
    prev_z = None
    for x, y, z in pts:
        if prev_z is not None and z < prev_z:
            volume += area * (prev_z - z)
        stairs = _staircase_insert(stairs, float(x), float(y))
        area = _staircase_area(stairs)
        prev_z = float(z)
    volume += area * prev_z
    return float(volume)


def hv_igd_ratio(front, reference_front, reference_point=None):
    """Hypervolume over IGD for a minimize-convention front.

    Hypervolume is taken after the transform g = nadir - f with the origin as
    reference, where nadir is the componentwise worst over front and reference
    plus a 10% margin of the observed span. An explicit reference_point (in
    minimize convention) overrides the nadir rule. A front at IGD zero returns
    the +inf sentinel.
    """
    front = np.asarray(front, dtype=np.float64)
    reference_front = np.asarray(reference_front, dtype=np.float64)
    distance = igd(front, reference_front)
    if distance == 0.0:
        return float("inf")
    if reference_point is None:
        both = np.vstack([front, reference_front])
        worst = both.max(axis=0)
        span = worst - both.min(axis=0)
        span[span <= 0] = 1.0
        reference_point = worst + 0.1 * span
    else:
        reference_point = np.asarray(reference_point, dtype=np.float64)
    return hypervolume(reference_point - front, np.zeros(3)) / distance


@dataclass(eq=False)
class ReferenceFront:
    """Approximate Pareto-optimal surface with the config that produced it."""
    dataset: str
    variant: str
    seed: int
    population_size: int
    generations: int
    crossover_prob: float
    mutation_prob: float
    points: np.ndarray   # (n, 3), minimize convention, lexsorted, deduplicated


def save_reference_front(ref, path):
    """Write a reference front as header comments plus one point per line."""
    lines = [
        f"# dataset {ref.dataset}",
        f"# variant {ref.variant}",
        f"# seed {ref.seed}",
        f"# population {ref.population_size}",
        f"# generations {ref.generations}",
        f"# crossover {ref.crossover_prob!r}",
        f"# mutation {ref.mutation_prob!r}",
    ]
    for row in ref.points:
        lines.append(" ".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")


def load_reference_front(path):
    """Reload a cached reference front; float round-trip is exact."""
    header = {}
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            header[key] = value
        else:
            parts = line.split()
            if len(parts) != 3:
                raise ValidationError(f"malformed reference front line: {line!r}")
            rows.append([float(v) for v in parts])
    try:
        return ReferenceFront(
            dataset=header["dataset"],
            variant=header["variant"],
            seed=int(header["seed"]),
            population_size=int(header["population"]),
            generations=int(header["generations"]),
            crossover_prob=float(header["crossover"]),
            mutation_prob=float(header["mutation"]),
            points=np.asarray(rows, dtype=np.float64).reshape(-1, 3),
        )
    except KeyError as exc:
        raise ValidationError(f"reference front file missing header field {exc}")


def build_reference_front(graph, variant, seed=0, dataset="", cache_path=None,
                          population_size=500, generations=500):
    """Long NSGA-III run whose rank-1 front approximates the Pareto surface.

    Uses p_c = 0.9 and p_m = 1/n. If cache_path exists it is loaded instead
    of re-running; otherwise the result is computed and, when a path is given,
    written there.
    """
    if cache_path is not None and cache_path.exists():
        return load_reference_front(cache_path)
    config = moea.RunConfig(variant, "NSGA3", population_size, generations, 0.9, seed=seed)
    result = moea.nsga3_run(graph, config)
    points = np.asarray([t[2].values for t in result.final_front], dtype=np.float64)
    points = np.unique(points, axis=0)   # unique() also lexsorts rows
    ref = ReferenceFront(
        dataset=dataset,
        variant=variant,
        seed=seed,
        population_size=population_size,
        generations=generations,
        crossover_prob=0.9,
        mutation_prob=1.0 / graph.node_count,
        points=points,
    )
    if cache_path is not None:
        save_reference_front(ref, cache_path)
    return ref
