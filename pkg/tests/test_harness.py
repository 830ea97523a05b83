import csv
import io

import numpy as np
import pytest

from mocd import cli, data
from mocd.graph import ValidationError, load_gml, load_labels
from mocd.harness import (ExperimentSpec, load_dataset, run_experiment, sweep)
from mocd.moea import RunConfig
from mocd.objectives import modularity

SMALL = dict(population_sizes=(16,), crossover_probs=(0.8,),
             mutation_probs=(None,), generations=(6,), runs_per_combo=2)


def test_spec_combos_cross_product_order():
    spec = ExperimentSpec("karate", "KRM", population_sizes=(10, 20),
                          crossover_probs=(0.8, 0.9), mutation_probs=(0.1,),
                          generations=(5,))
    combos = spec.combos()
    assert combos == [(10, 0.8, 0.1, 5), (10, 0.9, 0.1, 5),
                      (20, 0.8, 0.1, 5), (20, 0.9, 0.1, 5)]
    with pytest.raises(ValidationError):
        ExperimentSpec("karate", "KRM", population_sizes=())
    with pytest.raises(ValidationError):
        ExperimentSpec("karate", "KRM", runs_per_combo=0)


def test_load_dataset_bundled_and_edge_list(tmp_path):
    graph, truth, dataset_id = load_dataset("karate")
    assert dataset_id == "karate" and truth is not None and graph.node_count == 34
    edges = tmp_path / "tiny.edges"
    edges.write_text("a b\nb c\n")
    graph, truth, dataset_id = load_dataset(str(edges))
    assert dataset_id == "tiny" and truth is None and graph.node_count == 3
    gt = tmp_path / "tiny.labels"
    gt.write_text("a 0\nb 0\nc 1\n")
    _, truth, _ = load_dataset(str(edges), ground_truth=str(gt))
    assert truth.community_count == 2
    with pytest.raises(ValidationError):
        load_dataset("missing_file.gml")


def test_run_experiment_record_fields():
    graph, truth, dataset_id = load_dataset("karate")
    config = RunConfig("KRM", "NSGA3", 16, 5, 0.8, seed=0)
    record = run_experiment(graph, config, dataset_id=dataset_id, ground_truth=truth)
    assert record["max_q"] == max(record["front_points"][:, 2] * -1)
    assert 0.0 <= record["max_nmi"] <= 1.0
    assert record["best_k"] >= 2
    bare = run_experiment(graph, config, dataset_id=dataset_id)
    assert bare["max_nmi"] is None and bare["igd"] is None
    assert bare["max_q"] == record["max_q"]   # ground truth never alters the run


def test_run_experiment_persists_artifacts(tmp_path):
    graph, truth, dataset_id = load_dataset("karate")
    config = RunConfig("KRM", "NSGA3", 16, 5, 0.8, seed=3)
    record = run_experiment(graph, config, dataset_id=dataset_id,
                            ground_truth=truth, out_dir=tmp_path)
    front = tmp_path / "karate_krm_nsga3_p16_g5_s3.front.txt"
    labels = tmp_path / "karate_krm_nsga3_p16_g5_s3.best.labels"
    assert front.exists() and labels.exists()
    part = load_labels(labels.read_text(), graph)
    assert modularity(graph, part) == pytest.approx(record["max_q"], abs=1e-12)


def test_sweep_deterministic_reports(tmp_path):
    spec = ExperimentSpec("karate", "KRM", **SMALL)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    sweep(spec, out_dir=out_a)
    sweep(spec, out_dir=out_b)
    files_a = sorted(p.name for p in out_a.iterdir())
    assert files_a == sorted(p.name for p in out_b.iterdir())
    for name in files_a:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    assert "runs.csv" in files_a and "best_partition.labels" in files_a


def test_sweep_aggregates_recomputable_from_detail(tmp_path):
    spec = ExperimentSpec("karate", "KRM", population_sizes=(16, 20),
                          crossover_probs=(0.8,), mutation_probs=(None,),
                          generations=(6,), runs_per_combo=3)
    report = sweep(spec, out_dir=tmp_path)
    rows = list(csv.DictReader(io.StringIO((tmp_path / "runs.csv").read_text())))
    assert len(rows) == 6
    for combo_row in report.rows:
        cell = [r for r in rows if int(r["population"]) == combo_row["population"]]
        qs = np.array([float(r["max_q"]) for r in cell])
        nmis = np.array([float(r["max_nmi"]) for r in cell])
        assert combo_row["q_max"] == pytest.approx(qs.max(), abs=1e-12)
        assert combo_row["q_avg"] == pytest.approx(qs.mean(), abs=1e-12)
        assert combo_row["mean_product"] == pytest.approx((qs * nmis).mean(), abs=1e-12)


def test_sweep_best_combo_tie_breaks_to_lowest_index():
    spec = ExperimentSpec("karate", "KRM", population_sizes=(16, 16),
                          crossover_probs=(0.8,), mutation_probs=(None,),
                          generations=(5,), runs_per_combo=2)
    report = sweep(spec)
    assert report.rows[0]["mean_product"] == report.rows[1]["mean_product"]
    assert report.best_combo_index == 0


def test_sweep_records_cell_failures_and_continues():
    spec = ExperimentSpec("karate", "KRM", population_sizes=(16,),
                          crossover_probs=(0.8,), mutation_probs=(None, 1.5),
                          generations=(5,), runs_per_combo=2)
    report = sweep(spec)
    assert len(report.failures) == 1
    assert report.failures[0][0] == 1
    assert report.rows[1]["failed"] is not None
    assert report.best_combo_index == 0


def test_sweep_report_renders_comparison_table(tmp_path):
    spec = ExperimentSpec("karate", "KRM", **SMALL)
    sweep(spec, out_dir=tmp_path)
    text = (tmp_path / "summary_modularity.txt").read_text()
    assert "published comparison values" in text
    assert "MOGA-net" in text and "0.4198" in text


def test_cli_run_and_metrics_round_trip(tmp_path, capsys):
    out = tmp_path / "artifacts"
    code = cli.main(["run", "--dataset", "karate", "--variant", "krm",
                     "--population", "16", "--generations", "5",
                     "--seed", "2", "--out-dir", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "max_q=" in printed and "max_nmi=" in printed
    labels = next(out.glob("*.best.labels"))
    code = cli.main(["metrics", "--labels", str(labels), "--dataset", "karate"])
    assert code == 0
    assert "nmi=" in capsys.readouterr().out
    front = next(out.glob("*.front.txt"))
    if data.reference_front_path("karate", "KRM") is not None:
        code = cli.main(["metrics", "--front", str(front), "--dataset", "karate",
                         "--variant", "krm"])
        assert code == 0
        assert "hv_igd=" in capsys.readouterr().out


def test_cli_mutation_flag_forms(tmp_path, capsys):
    code = cli.main(["run", "--dataset", "karate", "--variant", "krm",
                     "--population", "8", "--generations", "2",
                     "--mutation", "1/34"])
    assert code == 0
    assert "mutation=0.029411764705882353" in capsys.readouterr().out


def test_cli_exit_codes(capsys):
    assert cli.main(["run", "--dataset", "karate", "--variant", "nope"]) == 1
    assert cli.main(["run", "--dataset", "no_such_file", "--variant", "krm"]) == 1
    assert cli.main(["metrics"]) == 1
    capsys.readouterr()


def test_cli_build_ref(tmp_path, capsys):
    code = cli.main(["build-ref", "--dataset", "karate", "--variant", "ccm",
                     "--population", "16", "--generations", "3",
                     "--out-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "wrote" in out
    assert (tmp_path / "karate_ccm_s0.txt").exists()


def test_cli_sweep_subcommand(tmp_path, capsys):
    code = cli.main(["sweep", "--dataset", "karate", "--variant", "krm",
                     "--population", "16", "--generations", "5",
                     "--runs", "2", "--out-dir", str(tmp_path)])
    assert code == 0
    assert "best_combo=0" in capsys.readouterr().out
    assert (tmp_path / "summary_modularity.csv").exists()
