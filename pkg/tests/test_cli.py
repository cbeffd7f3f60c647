import yaml

from gembench.cli import main
from gembench.harness import read_records


def test_cli_generate_run_report_plot(tmp_path, capsys):
    plan_path = tmp_path / "plan.yaml"
    plan_path.write_text(
        yaml.safe_dump(
            {
                "sizes": [24],
                "degrees": [4],
                "domains": {"social": ["stochastic_block_model"]},
                "include_kronecker": False,
                "sbm_blocks": 2,
            }
        )
    )
    corpus_dir = tmp_path / "corpus"
    assert main(
        ["generate", "--plan", str(plan_path), "--out", str(corpus_dir), "--seed", "5"]
    ) == 0
    assert (corpus_dir / "manifest.yaml").exists()
    assert list((corpus_dir / "graphs").glob("*.edges"))

    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        yaml.safe_dump(
            {
                "corpus": {"manifest": str(corpus_dir / "manifest.yaml")},
                "methods": ["common_neighbors", "hope"],
                "dimensions": [4, 8],
                "size_bins": [24],
                "degree_bins": [4],
                "trials": 1,
                "seed": 7,
                "precision_k": 10,
                "baseline_trials": 3,
                "output": str(tmp_path / "run"),
            }
        )
    )
    assert main(["run", "--config", str(config_path)]) == 0
    run_dir = tmp_path / "run"
    assert (run_dir / "records.csv").exists()
    assert (run_dir / "gfs_report.txt").exists()
    assert (run_dir / "timings.csv").exists()
    assert list((run_dir / "plots").glob("**/*.csv"))
    records = read_records(run_dir / "records.csv")
    assert {r.method for r in records} == {"common_neighbors", "hope"}

    original_report = (run_dir / "gfs_report.txt").read_text()
    assert main(["report", "--records", str(run_dir)]) == 0
    assert (run_dir / "gfs_report.txt").read_text() == original_report

    out_plots = tmp_path / "series"
    assert main(
        [
            "plot-data",
            "--records",
            str(run_dir),
            "--metric",
            "map",
            "--out",
            str(out_plots),
            "--size-bins",
            "24",
            "--degree-bins",
            "4",
        ]
    ) == 0
    assert list(out_plots.glob("**/*.csv"))


def test_cli_ingest(tmp_path):
    from conftest import random_graph
    from gembench.graph import save_edge_list

    src = tmp_path / "raw"
    src.mkdir()
    save_edge_list(random_graph(10, 0.4, seed=1), src / "net.edges")
    out = tmp_path / "ingested"
    assert main(["ingest", "--dir", str(src), "--out", str(out)]) == 0
    assert (out / "manifest.yaml").exists()


def test_cli_run_overrides(tmp_path):
    config_path = tmp_path / "config.yaml"
    config_path.write_text(
        yaml.safe_dump(
            {
                "corpus": {
                    "plan": {
                        "sizes": [24],
                        "degrees": [4],
                        "domains": {"social": ["stochastic_block_model"]},
                        "include_kronecker": False,
                        "sbm_blocks": 2,
                    }
                },
                "methods": ["common_neighbors"],
                "dimensions": [4],
                "precision_k": 5,
                "baseline_trials": 2,
                "output": str(tmp_path / "default_out"),
            }
        )
    )
    out = tmp_path / "override_out"
    assert main(
        ["run", "--config", str(config_path), "--out", str(out), "--workers", "1", "--seed", "3"]
    ) == 0
    assert (out / "records.csv").exists()
    assert not (tmp_path / "default_out").exists()
