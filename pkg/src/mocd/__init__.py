"""Multi-objective community detection toolkit."""

from mocd.graph import Graph, Partition, ParseError, ValidationError
from mocd.objectives import evaluate_partition
from mocd.moea import RunConfig, RunResult, moead_run, nsga3_run, run
from mocd.metrics import (build_reference_front, hv_igd_ratio, hypervolume,
                          igd, nmi)
from mocd.harness import ExperimentSpec, load_dataset, render_report, sweep

__all__ = [
    "Graph", "Partition", "ParseError", "ValidationError",
    "evaluate_partition",
    "RunConfig", "RunResult", "run", "nsga3_run", "moead_run",
    "nmi", "igd", "hypervolume", "hv_igd_ratio", "build_reference_front",
    "ExperimentSpec", "load_dataset", "sweep", "render_report",
]
__version__ = "0.1.0"
