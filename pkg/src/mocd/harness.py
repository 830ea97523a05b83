"""Experiment orchestration: single runs, parameter sweeps, report rendering.

All report files are byte-deterministic for a given spec: floats are written
with repr (exact round-trip), wall-clock times never reach a file, and every
iteration order is fixed by (combo index, seed).
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import pathlib
from dataclasses import dataclass, field

import numpy as np

from mocd import data, metrics, moea
from mocd.graph import ValidationError, load_edge_list, load_gml, load_labels

RUN_COLUMNS = (
    "dataset", "variant", "algorithm", "population", "generations",
    "crossover", "mutation", "seed", "max_q", "best_k", "max_nmi",
    "igd", "hv", "hv_igd",
)


@dataclass(frozen=True)
class ExperimentSpec:
    """A parameter grid over one dataset; the grid is a full cross-product.

    Cell (population, crossover, mutation, generations) number i runs
    runs_per_combo times with seeds base_seed .. base_seed+runs_per_combo-1.
    A mutation value of None resolves to 1/n at run time.
    """
    dataset: str
    variant: str
    algorithm: str = "NSGA3"
    population_sizes: tuple = (100,)
    crossover_probs: tuple = (0.8,)
    mutation_probs: tuple = (None,)
    generations: tuple = (100,)
    runs_per_combo: int = 10
    base_seed: int = 0
    ground_truth: str | None = None
    alpha: float = 1.0
    r: float = 1.0
    moead_neighbors: int = 20
    pbi_theta: float = 5.0

    def __post_init__(self):
        if self.runs_per_combo < 1:
            raise ValidationError("runs_per_combo must be at least 1")
        for name in ("population_sizes", "crossover_probs", "mutation_probs", "generations"):
            if not tuple(getattr(self, name)):
                raise ValidationError(f"{name} must list at least one value")

    def combos(self):
        out = []
        for pop in self.population_sizes:
            for pc in self.crossover_probs:
                for pm in self.mutation_probs:
                    for gens in self.generations:
                        out.append((pop, pc, pm, gens))
        return out

    def cell_config(self, combo, seed):
        pop, pc, pm, gens = combo
        return moea.RunConfig(
            variant=self.variant, algorithm=self.algorithm,
            population_size=pop, generations=gens,
            crossover_prob=pc, mutation_prob=pm, seed=seed,
            alpha=self.alpha, r=self.r,
            moead_neighbors=self.moead_neighbors, pbi_theta=self.pbi_theta,
        )


@dataclass
class SweepReport:
    spec: ExperimentSpec
    dataset_id: str
    records: list                 # per-run dicts, sorted by (combo index, seed)
    rows: list                    # per-combo aggregate dicts
    best_combo_index: int | None  # None when every cell failed
    failures: list                # (combo index, message)


def load_dataset(dataset, ground_truth=None):
    """Resolve a bundled name or a file path to (graph, truth, dataset id).

    Bundled datasets carry their ground truth; an explicit ground_truth path
    overrides it. Edge-list files have no embedded truth.
    """
    if dataset in data.BUNDLED:
        graph, truth = load_gml(data.path(dataset).read_text())
        dataset_id = dataset
    else:
        path = pathlib.Path(dataset)
        if not path.is_file():
            raise ValidationError(f"dataset file not found: {dataset}")
        if path.suffix.lower() == ".gml":
            graph, truth = load_gml(path.read_text())
        else:
            graph = load_edge_list(path.read_text())
            truth = None
        dataset_id = path.stem
    if ground_truth is not None:
        truth = load_labels(pathlib.Path(ground_truth).read_text(), graph)
    return graph, truth, dataset_id


def front_metrics(front_points, reference):
    both = np.vstack([front_points, reference.points])
    worst = both.max(axis=0)
    span = worst - both.min(axis=0)
    span[span <= 0] = 1.0
    nadir = worst + 0.1 * span
    distance = metrics.igd(front_points, reference.points)
    volume = metrics.hypervolume(nadir - front_points, np.zeros(3))
    ratio = float("inf") if distance == 0.0 else float(volume / distance)
    return distance, volume, ratio


def run_experiment(graph, config, dataset_id="", ground_truth=None,
                   reference=None, out_dir=None):
    """Execute one configured run and distill a per-run record.

    Records the front's best raw modularity and, when available, the best NMI
    over front members and HV/IGD against the cached reference front. With
    out_dir set, the front and the best partition are persisted.
    """
    result = moea.run(graph, config)
    front = result.final_front
    qs = [t[2].raw[4] for t in front]
    best = front[int(np.argmax(qs))]
    record = {
        "dataset": dataset_id,
        "variant": config.variant,
        "algorithm": config.algorithm,
        "population": config.population_size,
        "generations": config.generations,
        "crossover": config.crossover_prob,
        "mutation": config.mutation_prob if config.mutation_prob is not None
                    else 1.0 / graph.node_count,
        "seed": config.seed,
        "max_q": float(max(qs)),
        "best_k": best[1].community_count,
        "max_nmi": None,
        "igd": None,
        "hv": None,
        "hv_igd": None,
        "best_assignment": tuple(int(c) for c in best[1].assignment),
        "front_points": np.asarray([t[2].values for t in front], dtype=np.float64),
        "wall_time": result.wall_time,   # in-memory only, never rendered
    }
    if ground_truth is not None:
        record["max_nmi"] = float(max(metrics.nmi(t[1], ground_truth) for t in front))
    if reference is not None:
        record["igd"], record["hv"], record["hv_igd"] = \
            front_metrics(record["front_points"], reference)
    if out_dir is not None:
        out_dir = pathlib.Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = (f"{dataset_id}_{config.variant.lower()}_{config.algorithm.lower()}"
                f"_p{config.population_size}_g{config.generations}_s{config.seed}")
        pts = np.unique(record["front_points"], axis=0)
        front_lines = [f"# dataset {dataset_id}", f"# variant {config.variant}",
                       f"# seed {config.seed}"]
        front_lines += [" ".join(repr(float(v)) for v in row) for row in pts]
        (out_dir / f"{stem}.front.txt").write_text("\n".join(front_lines) + "\n")
        label_lines = [f"{graph.labels[i]} {c}"
                       for i, c in enumerate(record["best_assignment"])]
        (out_dir / f"{stem}.best.labels").write_text("\n".join(label_lines) + "\n")
    return record


def _run_cell(args):
    # config construction happens here so invalid cells fail inside the cell
    graph, spec, combo, seed, dataset_id, truth, reference = args
    config = spec.cell_config(combo, seed)
    return run_experiment(graph, config, dataset_id=dataset_id,
                          ground_truth=truth, reference=reference)


def sweep(spec, workers=1, out_dir=None):
    """Run the full grid and aggregate per-combo statistics.

    Cells fail independently: an error in any run marks that combo as failed
    and the sweep continues. The best combo maximizes the mean per-run
    (max Q x max NMI) product when ground truth exists, mean max Q otherwise;
    ties go to the lowest combo index.
    """
    graph, truth, dataset_id = load_dataset(spec.dataset, spec.ground_truth)
    ref_path = data.reference_front_path(dataset_id, spec.variant)
    reference = metrics.load_reference_front(ref_path) if ref_path else None

    combos = spec.combos()
    jobs = []
    for ci, combo in enumerate(combos):
        for r in range(spec.runs_per_combo):
            jobs.append((ci, combo, spec.base_seed + r))

    outcomes = {}
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_run_cell, (graph, spec, combo, seed, dataset_id,
                                        truth, reference)): (ci, seed)
                for ci, combo, seed in jobs
            }
            for fut in concurrent.futures.as_completed(futures):
                ci, seed = futures[fut]
                try:
                    outcomes[(ci, seed)] = fut.result()
                except Exception as exc:   # noqa: BLE001
                    outcomes[(ci, seed)] = exc
    else:
        for ci, combo, seed in jobs:
            try:
                outcomes[(ci, seed)] = _run_cell(
                    (graph, spec, combo, seed, dataset_id, truth, reference))
            except Exception as exc:   # noqa: BLE001
                outcomes[(ci, seed)] = exc

    records = []
    rows = []
    failures = []
    for ci, combo in enumerate(combos):
        pop, pc, pm, gens = combo
        cell = [outcomes[(ci, spec.base_seed + r)] for r in range(spec.runs_per_combo)]
        errors = [c for c in cell if isinstance(c, Exception)]
        row = {
            "combo_index": ci, "population": pop, "crossover": pc,
            "mutation": pm if pm is not None else 1.0 / graph.node_count,
            "generations": gens, "failed": None,
        }
        if errors:
            row["failed"] = str(errors[0])
            failures.append((ci, str(errors[0])))
            rows.append(row)
            continue
        records.extend(cell)
        q = np.array([c["max_q"] for c in cell])
        row["q_max"] = float(q.max())
        row["q_avg"] = float(q.mean())
        if truth is not None:
            nm = np.array([c["max_nmi"] for c in cell])
            row["nmi_max"] = float(nm.max())
            row["nmi_avg"] = float(nm.mean())
            row["mean_product"] = float((q * nm).mean())
        if reference is not None:
            ratios = np.array([c["hv_igd"] for c in cell])
            row["ratio_mean"] = float(ratios.mean())
            row["ratio_max"] = float(ratios.max())
        rows.append(row)

    ok_rows = [row for row in rows if row["failed"] is None]
    best_index = None
    if ok_rows:
        key = "mean_product" if truth is not None else "q_avg"
        best_value = max(row[key] for row in ok_rows)
        best_index = min(row["combo_index"] for row in ok_rows if row[key] == best_value)

    report = SweepReport(spec=spec, dataset_id=dataset_id, records=records,
                         rows=rows, best_combo_index=best_index, failures=failures)
    if out_dir is not None:
        render_report(report, out_dir)
    return report


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _aligned_text(header, rows, title):
    cells = [list(header)] + [[format_value(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = [title]
    for r in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _reported_rows(dataset_id):
    try:
        text = data.path("reported_modularity.csv").read_text()
    except FileNotFoundError:
        return None
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    out = {}
    for line in reader:
        if line and line[0] == dataset_id:
            out[line[1]] = list(zip(header[2:], line[2:]))
    return out or None


def render_report(report, out_dir):
    """Write the report files; returns the written paths.

    Emits per-run detail (csv + structured text), a modularity summary next
    to the published comparison values when the dataset ships them, an NMI
    summary, an HV/IGD grid over the combos, and the best partition as a
    labels file.
    """
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = report.spec
    written = []

    detail_rows = [[rec[c] for c in RUN_COLUMNS] for rec in report.records]
    path = out_dir / "runs.csv"
    path.write_text(_csv_text(RUN_COLUMNS, detail_rows))
    written.append(path)

    lines = []
    for rec in report.records:
        lines.append("run " + " ".join(f"{c}={format_value(rec[c])}" for c in RUN_COLUMNS))
    path = out_dir / "runs.txt"
    path.write_text("\n".join(lines) + "\n")
    written.append(path)

    combo_header = ("combo", "population", "crossover", "mutation", "generations")
    q_rows = []
    nmi_rows = []
    ratio_rows = []
    for row in report.rows:
        base = [row["combo_index"], row["population"], row["crossover"],
                row["mutation"], row["generations"]]
        if row["failed"] is not None:
            q_rows.append(base + ["failed: " + row["failed"], ""])
            continue
        q_rows.append(base + [row["q_max"], row["q_avg"]])
        if "nmi_max" in row:
            nmi_rows.append(base + [row["nmi_max"], row["nmi_avg"], row["mean_product"]])
        if "ratio_mean" in row:
            ratio_rows.append(base + [row["ratio_mean"], row["ratio_max"]])

    title = (f"dataset={report.dataset_id} variant={spec.variant} "
             f"algorithm={spec.algorithm} runs={spec.runs_per_combo} "
             f"base_seed={spec.base_seed} best_combo={format_value(report.best_combo_index)}")
    header = combo_header + ("q_max", "q_avg")
    path = out_dir / "summary_modularity.csv"
    path.write_text(_csv_text(header, q_rows))
    written.append(path)
    text = _aligned_text(header, q_rows, title)
    reported = _reported_rows(report.dataset_id)
    if reported is not None:
        comp_rows = [[alg, qmax, qavg] for (alg, qmax), (_, qavg)
                     in zip(reported["Qmax"], reported["Qavg"])]
        text += "\n" + _aligned_text(("algorithm", "q_max", "q_avg"), comp_rows,
                                     "published comparison values")
    path = out_dir / "summary_modularity.txt"
    path.write_text(text)
    written.append(path)

    if nmi_rows:
        header = combo_header + ("nmi_max", "nmi_avg", "mean_q_nmi_product")
        path = out_dir / "summary_nmi.csv"
        path.write_text(_csv_text(header, nmi_rows))
        written.append(path)
        path = out_dir / "summary_nmi.txt"
        path.write_text(_aligned_text(header, nmi_rows, title))
        written.append(path)

    if ratio_rows:
        header = combo_header + ("hv_igd_mean", "hv_igd_max")
        path = out_dir / "summary_hv_igd.csv"
        path.write_text(_csv_text(header, ratio_rows))
        written.append(path)
        path = out_dir / "summary_hv_igd.txt"
        path.write_text(_aligned_text(header, ratio_rows, title))
        written.append(path)

    if report.best_combo_index is not None and report.records:
        best_rows = [rec for rec in report.records
                     if (rec["population"], rec["crossover"], rec["mutation"],
                         rec["generations"]) == _combo_key(report, report.best_combo_index)]
        best = max(best_rows, key=lambda rec: (rec["max_q"], -rec["seed"]))
        graph, _, _ = load_dataset(spec.dataset, spec.ground_truth)
        lines = [f"{graph.labels[i]} {c}" for i, c in enumerate(best["best_assignment"])]
        path = out_dir / "best_partition.labels"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written


def _combo_key(report, combo_index):
    row = report.rows[combo_index]
    return (row["population"], row["crossover"], row["mutation"], row["generations"])
