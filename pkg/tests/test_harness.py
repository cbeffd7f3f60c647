import json
from pathlib import Path

import numpy as np
import pytest
import yaml

from gembench.evaluation import METRIC_MAP, METRIC_P_AT_K
from gembench.exceptions import ValidationError
from gembench.generators import CorpusPlan
from gembench.harness import (
    ENV_SEED,
    ENV_WORKERS,
    ExperimentConfig,
    config_from_dict,
    emit_plot_series,
    emit_report,
    format_report,
    load_config,
    read_records,
    resolve_method_params,
    run_experiment,
    write_records,
)

TINY_PLAN = CorpusPlan(
    sizes=(24, 48),
    degrees=(4.0,),
    domains={
        "social": ("stochastic_block_model",),
        "internet": ("barabasi_albert",),
    },
    include_kronecker=False,
    sbm_blocks=2,
)

FAST_PARAMS = {
    "sdne": {"hidden_layers": [8], "epochs": 10},
    "graph_factorization": {"epochs": 30},
}


def tiny_config(**overrides):
    base = dict(
        corpus_plan=TINY_PLAN,
        dimensions=(4, 8),
        size_bins=(24, 48),
        degree_bins=(4.0,),
        trials=1,
        seed=11,
        precision_k=10,
        baseline_trials=3,
        method_params=FAST_PARAMS,
        output="unused",
    )
    base.update(overrides)
    return ExperimentConfig(**base)


# -- config ------------------------------------------------------------------------


def test_config_validation_errors():
    with pytest.raises(ValidationError, match="corpus"):
        ExperimentConfig(corpus_plan=None).validate()
    with pytest.raises(ValidationError, match="power of two"):
        tiny_config(dimensions=(3,)).validate()
    with pytest.raises(ValidationError, match="unknown method"):
        tiny_config(methods=("pagerank",)).validate()
    with pytest.raises(ValidationError, match="hide_fraction"):
        tiny_config(hide_fraction=1.0).validate()
    with pytest.raises(ValidationError, match="map_mode"):
        tiny_config(map_mode="weird").validate()
    with pytest.raises(ValidationError, match="decoder"):
        tiny_config(decoders={"common_neighbors": "inner_product"}).validate()


def test_config_from_dict_and_file(tmp_path):
    payload = {
        "corpus": {"plan": {"sizes": [32], "degrees": [4], "sbm_blocks": 2}},
        "methods": ["common_neighbors", "hope"],
        "dimensions": [8, 16],
        "trials": 2,
        "seed": 3,
        "output": "out",
    }
    config = config_from_dict(payload)
    assert config.corpus_plan.sizes == (32,)
    assert config.methods == ("common_neighbors", "hope")
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(payload))
    assert load_config(path) == config
    with pytest.raises(ValidationError, match="unknown config"):
        config_from_dict({"corpus": {"plan": {}}, "bogus": 1})


def test_config_env_overrides(tmp_path, monkeypatch):
    payload = {"corpus": {"plan": {"sbm_blocks": 2}}, "seed": 1, "workers": 1}
    monkeypatch.setenv(ENV_SEED, "99")
    monkeypatch.setenv(ENV_WORKERS, "3")
    config = config_from_dict(payload)
    assert config.seed == 99
    assert config.workers == 3


def test_resolve_method_params_overrides_and_errors():
    config = tiny_config()
    params = resolve_method_params(config, "sdne")
    assert params.hidden_layers == (8,) and params.epochs == 10
    assert resolve_method_params(config, "common_neighbors") is None
    with pytest.raises(ValidationError):
        resolve_method_params(
            tiny_config(method_params={"common_neighbors": {"x": 1}}),
            "common_neighbors",
        )


# -- run_experiment -----------------------------------------------------------------


def test_counting_contract():
    # 4 graphs (2 sizes x 2 domains) x (2 embedding methods x 2 dims + 1
    # heuristic replicated across 2 dims) x 1 trial
    config = tiny_config(methods=("common_neighbors", "hope", "graph_factorization"))
    result = run_experiment(config)
    per_graph = 2 * 2 + 1 * 2
    assert len(result.records) == 4 * per_graph
    cn = [r for r in result.records if r.method == "common_neighbors"]
    assert sorted({r.dimension for r in cn}) == [4, 8]
    # heuristic rows replicated across dimensions carry identical metrics
    by_graph = {}
    for r in cn:
        by_graph.setdefault(r.graph, set()).add((r.map, r.p_at_k))
    assert all(len(v) == 1 for v in by_graph.values())


def test_rerun_determinism_and_worker_invariance(tmp_path):
    config = tiny_config(output=str(tmp_path / "a"))
    r1 = run_experiment(config)
    r2 = run_experiment(config)
    assert r1.records == r2.records
    r3 = run_experiment(tiny_config(workers=2, output=str(tmp_path / "b")))
    assert r3.records == r1.records


def test_trials_get_distinct_seeds():
    config = tiny_config(trials=3, methods=("common_neighbors",))
    result = run_experiment(config)
    seeds = {
        (r.graph, r.trial): r.trial_seed
        for r in result.records
        if r.dimension == 4
    }
    assert len(set(seeds.values())) == len(seeds)


def test_failures_are_quarantined():
    # LE needs d <= lcc-1; dimension 32 exceeds it on the 24-node graph
    config = tiny_config(
        methods=("common_neighbors", "laplacian_eigenmaps"),
        dimensions=(4, 32),
    )
    result = run_experiment(config)
    assert any(f.method == "laplacian_eigenmaps" for f in result.failures)
    failed_keys = {(f.graph, f.dimension) for f in result.failures}
    assert all(
        (r.graph, r.dimension) not in failed_keys
        or r.method != "laplacian_eigenmaps"
        for r in result.records
    )


def test_fully_failed_method_aborts():
    config = tiny_config(
        methods=("laplacian_eigenmaps",), dimensions=(256,)
    )
    with pytest.raises(RuntimeError, match="laplacian_eigenmaps"):
        run_experiment(config)


def test_method_params_fail_fast():
    config = tiny_config(method_params={"sdne": {"beta_penalty": 0.5}})
    with pytest.raises(ValidationError, match="beta_penalty"):
        run_experiment(config)


def test_gfs_reports_cover_methods_and_dimensions():
    config = tiny_config(methods=("common_neighbors", "hope"))
    result = run_experiment(config)
    assert sorted(result.gfs_by_dimension) == [4, 8]
    for report in result.gfs_by_dimension.values():
        assert ("hope", METRIC_MAP) in report.entries
        assert ("common_neighbors", METRIC_P_AT_K) in report.entries
    assert ("hope", METRIC_MAP) in result.gfs_best.entries


def test_save_artifacts(tmp_path):
    config = tiny_config(
        methods=("common_neighbors", "hope"),
        output=str(tmp_path),
        save_embeddings=True,
        save_splits=True,
    )
    run_experiment(config)
    assert list((tmp_path / "embeddings").glob("*.txt"))
    assert list((tmp_path / "splits").glob("*.train"))


# -- persistence and reports -----------------------------------------------------------


def test_records_round_trip(tmp_path):
    result = run_experiment(tiny_config(methods=("common_neighbors", "hope")))
    path = tmp_path / "records.csv"
    write_records(result.records, path)
    assert read_records(path) == result.records


def test_emit_report_files(tmp_path):
    result = run_experiment(tiny_config(methods=("adamic_adar", "hope")))
    paths = emit_report(result, tmp_path)
    text = paths["report"].read_text()
    assert "GFS (dimension 4)" in text
    assert "micro-MAP" in text and "macro-MAP" in text
    assert "internet-MAP" in text and "social-MAP" in text
    assert "Best over dimensions" in text
    # round-trip audit: regenerating the report from the flat table
    # reproduces it byte for byte
    assert format_report(read_records(paths["records"])) == text


def test_report_single_graph_micro_equals_macro(tmp_path):
    plan = CorpusPlan(
        sizes=(24,),
        degrees=(4.0,),
        domains={"social": ("stochastic_block_model",)},
        include_kronecker=False,
        sbm_blocks=2,
    )
    config = tiny_config(corpus_plan=plan, methods=("common_neighbors",))
    result = run_experiment(config)
    entry = result.gfs_by_dimension[4].entry("common_neighbors", METRIC_MAP)
    assert entry.micro == entry.macro
    report_text = format_report(result)
    assert "social" in report_text


def test_report_std_zero_single_trial():
    result = run_experiment(tiny_config(methods=("common_neighbors",)))
    text = format_report(result)
    assert "±0" in text


def test_report_empty_records_error():
    with pytest.raises(ValidationError):
        format_report([])


def test_plot_series_schema(tmp_path):
    config = tiny_config(methods=("common_neighbors", "hope"))
    result = run_experiment(config)
    files = emit_plot_series(
        result.records,
        METRIC_MAP,
        tmp_path,
        size_bins=(24, 48),
        degree_bins=(4.0,),
        density_band=(3.0, 5.0),
    )
    assert files
    for path in files:
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "dimension,mean,std"
        dims = [int(r.split(",")[0]) for r in rows[1:]]
        assert dims == sorted(dims)
    names = {p.name for p in files}
    assert any("size24" in n for n in names)
    assert any("degree4" in n for n in names)


def test_plot_series_absent_method_no_file(tmp_path):
    config = tiny_config(methods=("common_neighbors",))
    result = run_experiment(config)
    files = emit_plot_series(
        result.records, METRIC_P_AT_K, tmp_path, size_bins=(24, 48), degree_bins=(4.0,)
    )
    assert all("hope" not in p.name for p in files)


def test_plot_series_mean_std_convention(tmp_path):
    # two trials with MAP 0.2 and 0.4 -> mean 0.3, std 0.1414...
    from gembench.harness import RunRecord

    records = []
    for trial, value in enumerate((0.2, 0.4)):
        records.append(
            RunRecord(
                graph="g",
                domain="social",
                n=24,
                m=48,
                density=0.17,
                method="hope",
                dimension=8,
                trial=trial,
                trial_seed=trial,
                map=value,
                map_alt=value,
                p_at_k=0.0,
                k=10,
                random_map=0.01,
                random_map_alt=0.01,
                random_p_at_k=0.01,
                params="{}",
            )
        )
    files = emit_plot_series(
        records, METRIC_MAP, tmp_path, size_bins=(24,), degree_bins=(4.0,)
    )
    row = files[0].read_text().strip().splitlines()[1].split(",")
    assert float(row[1]) == pytest.approx(0.3)
    assert float(row[2]) == pytest.approx(0.1414, abs=1e-3)


def test_params_snapshot_in_records():
    result = run_experiment(tiny_config(methods=("hope",)))
    params = json.loads(result.records[0].params)
    assert params == {"beta_factor": 0.5}
