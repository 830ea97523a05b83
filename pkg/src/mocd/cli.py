"""Command-line interface: run, sweep, metrics, build-ref subcommands."""

from __future__ import annotations

import argparse
import pathlib
import sys

import numpy as np

from mocd import data, harness, metrics, moea
from mocd.graph import ParseError, ValidationError, load_labels


class _Parser(argparse.ArgumentParser):
    # argparse usage problems are validation errors (exit code 1), not crashes
    def error(self, message):
        raise ValidationError(message)


def _parse_mutation(text):
    """Mutation rate flag: a float, a fraction like 1/34, or none for 1/n."""
    if text.lower() in ("none", "1/n"):
        return None
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)


def _add_common(parser, multi):
    parser.add_argument("--dataset", required=True,
                        help="bundled name (karate, dolphins, football, polbooks) or file path")
    parser.add_argument("--ground-truth", default=None,
                        help="labels file overriding any embedded ground truth")
    parser.add_argument("--variant", required=True, choices=["krm", "ccm"])
    parser.add_argument("--algorithm", default="nsga3", choices=["nsga3", "moead"])
    nargs = "+" if multi else None
    parser.add_argument("--population", type=int, nargs=nargs,
                        default=[100] if multi else 100)
    parser.add_argument("--generations", type=int, nargs=nargs,
                        default=[100] if multi else 100)
    parser.add_argument("--crossover", type=float, nargs=nargs,
                        default=[0.8] if multi else 0.8)
    parser.add_argument("--mutation", type=_parse_mutation, nargs=nargs,
                        default=[None] if multi else None,
                        help="float, fraction like 1/34, or none for 1/n")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default=None)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--r", type=float, default=1.0)
    parser.add_argument("--pbi-theta", type=float, default=5.0)
    parser.add_argument("--moead-neighbors", type=int, default=20)


def _cmd_run(args):
    graph, truth, dataset_id = harness.load_dataset(args.dataset, args.ground_truth)
    config = moea.RunConfig(
        variant=args.variant.upper(), algorithm=args.algorithm.upper(),
        population_size=args.population, generations=args.generations,
        crossover_prob=args.crossover, mutation_prob=args.mutation,
        seed=args.seed, alpha=args.alpha, r=args.r,
        moead_neighbors=args.moead_neighbors, pbi_theta=args.pbi_theta,
    )
    ref_path = data.reference_front_path(dataset_id, config.variant)
    reference = metrics.load_reference_front(ref_path) if ref_path else None
    record = harness.run_experiment(graph, config, dataset_id=dataset_id,
                                    ground_truth=truth, reference=reference,
                                    out_dir=args.out_dir)
    for column in harness.RUN_COLUMNS:
        print(f"{column}={harness.format_value(record[column])}")
    print(f"front_size={len(record['front_points'])}")
    return 0


def _cmd_sweep(args):
    spec = harness.ExperimentSpec(
        dataset=args.dataset, variant=args.variant.upper(),
        algorithm=args.algorithm.upper(),
        population_sizes=tuple(args.population),
        crossover_probs=tuple(args.crossover),
        mutation_probs=tuple(args.mutation),
        generations=tuple(args.generations),
        runs_per_combo=args.runs, base_seed=args.seed,
        ground_truth=args.ground_truth, alpha=args.alpha, r=args.r,
        moead_neighbors=args.moead_neighbors, pbi_theta=args.pbi_theta,
    )
    report = harness.sweep(spec, workers=args.workers, out_dir=args.out_dir)
    print(f"combos={len(report.rows)} runs={len(report.records)} "
          f"failures={len(report.failures)} best_combo={harness.format_value(report.best_combo_index)}")
    for ci, message in report.failures:
        print(f"combo {ci} failed: {message}", file=sys.stderr)
    return 0 if not report.failures else 2


def _load_front_points(path):
    rows = []
    for line in pathlib.Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"malformed front line: {line!r}")
        rows.append([float(v) for v in parts])
    if not rows:
        raise ValidationError(f"front file {path} holds no points")
    return np.asarray(rows, dtype=np.float64)


def _cmd_metrics(args):
    printed = False
    if args.front is not None:
        front = _load_front_points(args.front)
        reference = None
        if args.reference is not None:
            reference = metrics.load_reference_front(pathlib.Path(args.reference))
        elif args.dataset is not None:
            ref_path = data.reference_front_path(args.dataset, args.variant.upper())
            if ref_path is None:
                raise ValidationError(
                    f"no bundled reference front for {args.dataset}/{args.variant}")
            reference = metrics.load_reference_front(ref_path)
        if reference is None:
            raise ValidationError("--front needs --reference or a bundled --dataset")
        distance, volume, ratio = harness.front_metrics(front, reference)
        print(f"igd={distance!r}")
        print(f"hv={volume!r}")
        print(f"hv_igd={ratio!r}")
        printed = True
    if args.labels is not None:
        if args.dataset is None:
            raise ValidationError("--labels needs --dataset to interpret node names")
        graph, truth, _ = harness.load_dataset(args.dataset, args.ground_truth)
        if truth is None:
            raise ValidationError("NMI needs ground truth (embedded or --ground-truth)")
        partition = load_labels(pathlib.Path(args.labels).read_text(), graph)
        print(f"nmi={metrics.nmi(partition, truth)!r}")
        printed = True
    if not printed:
        raise ValidationError("metrics needs --front and/or --labels")
    return 0


def _cmd_build_ref(args):
    graph, _, dataset_id = harness.load_dataset(args.dataset, None)
    out_dir = pathlib.Path(args.out_dir) if args.out_dir else pathlib.Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"{dataset_id}_{args.variant.lower()}_s{args.seed}.txt"
    ref = metrics.build_reference_front(
        graph, args.variant.upper(), seed=args.seed, dataset=dataset_id,
        cache_path=target, population_size=args.population,
        generations=args.generations,
    )
    print(f"wrote {target} ({len(ref.points)} points)")
    return 0


def build_parser():
    parser = _Parser(prog="mocd",
                     description="Multi-objective evolutionary community detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a single configured run")
    _add_common(p_run, multi=False)

    p_sweep = sub.add_parser("sweep", help="run a parameter grid and render reports")
    _add_common(p_sweep, multi=True)
    p_sweep.add_argument("--runs", type=int, default=10)
    p_sweep.add_argument("--workers", type=int, default=1)

    p_metrics = sub.add_parser("metrics", help="recompute metrics for saved outputs")
    p_metrics.add_argument("--front", default=None, help="saved front points file")
    p_metrics.add_argument("--reference", default=None, help="reference front file")
    p_metrics.add_argument("--labels", default=None, help="saved partition labels file")
    p_metrics.add_argument("--dataset", default=None)
    p_metrics.add_argument("--variant", default="krm", choices=["krm", "ccm"])
    p_metrics.add_argument("--ground-truth", default=None)

    p_ref = sub.add_parser("build-ref", help="build and cache a reference front")
    p_ref.add_argument("--dataset", required=True)
    p_ref.add_argument("--variant", required=True, choices=["krm", "ccm"])
    p_ref.add_argument("--seed", type=int, default=0)
    p_ref.add_argument("--population", type=int, default=500)
    p_ref.add_argument("--generations", type=int, default=500)
    p_ref.add_argument("--out-dir", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"run": _cmd_run, "sweep": _cmd_sweep,
                   "metrics": _cmd_metrics, "build-ref": _cmd_build_ref}[args.command]
        return handler(args)
    except (ValidationError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:   # noqa: BLE001
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
