"""Experiment orchestration: the (graph x method x dimension x trial) grid.

Given a corpus (synthetic plan or manifest), every method scores every
graph's split at every embedding dimension; heuristics run once per
(graph, trial) since they are dimension-invariant, and their records are
replicated across dimensions for plotting. Results are merged in sorted
task order so the worker count never changes any output byte.

Wall-clock timings are recorded per task but written to a separate
timings file: the canonical results table and reports are byte-identical
across reruns, which a timing column would break.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import yaml
from threadpoolctl import threadpool_limits

from . import embeddings as emb
from . import heuristics as heur
from .corpus import CorpusMember, load_corpus
from .evaluation import (
    MAP_MODE_ALL_NODES,
    MAP_MODE_HIDDEN_NODES,
    MAP_MODES,
    METRIC_MAP,
    METRIC_P_AT_K,
    GfsReport,
    MetricValue,
    gfs_scores,
    random_baseline,
    split_metrics_from_scores,
)
from .exceptions import ValidationError
from .generators import CorpusPlan, build_synthetic_corpus
from .graph import Graph
from .seeding import derive_seed
from .splits import EdgeSplit, split_edges

ALL_METHODS = tuple(heur.HEURISTIC_KINDS) + tuple(emb.EMBEDDING_METHODS)

RECORD_COLUMNS = (
    "graph",
    "domain",
    "n",
    "m",
    "density",
    "method",
    "dimension",
    "trial",
    "trial_seed",
    "map",
    "map_alt",
    "p_at_k",
    "k",
    "random_map",
    "random_map_alt",
    "random_p_at_k",
    "params",
)

RECORDS_FILE = "records.csv"
REPORT_FILE = "gfs_report.txt"
FAILURES_FILE = "failures.csv"
TIMINGS_FILE = "timings.csv"

ENV_SEED = "GEMBENCH_SEED"
ENV_WORKERS = "GEMBENCH_WORKERS"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; (config, seed) fixes every output byte."""

    corpus_manifest: str | None = None
    corpus_plan: CorpusPlan | None = None
    methods: tuple[str, ...] = ALL_METHODS
    dimensions: tuple[int, ...] = (16, 32, 64, 128)
    size_bins: tuple[int, ...] = (256, 512, 1024)
    degree_bins: tuple[float, ...] = (3.0, 4.0, 5.0)
    density_band: tuple[float, float] = (3.0, 5.0)
    hide_fraction: float = 0.2
    preserve_connectivity: bool = True
    trials: int = 1
    seed: int = 42
    precision_k: int = 100
    map_mode: str = MAP_MODE_ALL_NODES
    baseline_trials: int = 10
    workers: int = 1
    output: str = "runs/latest"
    method_params: Mapping[str, Mapping] = field(default_factory=dict)
    decoders: Mapping[str, str] = field(default_factory=dict)
    save_embeddings: bool = False
    save_splits: bool = False

    def validate(self) -> None:
        if self.corpus_manifest is None and self.corpus_plan is None:
            raise ValidationError(
                "config needs a corpus: manifest path or synthetic plan"
            )
        if not self.methods:
            raise ValidationError("methods list is empty")
        for method in self.methods:
            if method not in ALL_METHODS:
                raise ValidationError(
                    f"unknown method {method!r}; implemented: {ALL_METHODS}"
                )
        if not self.dimensions:
            raise ValidationError("dimensions list is empty")
        for d in self.dimensions:
            if d < 1 or (d & (d - 1)) != 0:
                raise ValidationError(
                    f"dimension {d} must be a power of two"
                )
        if not 0.0 <= self.hide_fraction < 1.0:
            raise ValidationError("hide_fraction must be in [0, 1)")
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if self.precision_k < 1:
            raise ValidationError("precision_k must be >= 1")
        if self.map_mode not in MAP_MODES:
            raise ValidationError(f"unknown map_mode {self.map_mode!r}")
        if self.baseline_trials < 1:
            raise ValidationError("baseline_trials must be >= 1")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")
        for method in self.method_params:
            if method not in ALL_METHODS:
                raise ValidationError(
                    f"method_params for unknown method {method!r}"
                )
        for method, decoder in self.decoders.items():
            if method not in emb.EMBEDDING_METHODS:
                raise ValidationError(
                    f"decoder override for non-embedding method {method!r}"
                )
            if decoder not in emb.DECODERS:
                raise ValidationError(f"unknown decoder {decoder!r}")


@dataclass(frozen=True)
class RunRecord:
    """One scored (graph, method, dimension, trial) cell."""

    graph: str
    domain: str
    n: int
    m: int
    density: float
    method: str
    dimension: int
    trial: int
    trial_seed: int
    map: float
    map_alt: float
    p_at_k: float
    k: int
    random_map: float
    random_map_alt: float
    random_p_at_k: float
    params: str  # JSON snapshot of hyperparameters

    def sort_key(self):
        return (self.graph, self.method, self.dimension, self.trial)


@dataclass(frozen=True)
class TaskFailure:
    graph: str
    method: str
    dimension: int | None
    trial: int
    error: str


@dataclass
class ExperimentResult:
    records: list[RunRecord]
    failures: list[TaskFailure]
    gfs_by_dimension: dict[int, GfsReport]
    gfs_best: GfsReport
    domains: dict[str, str]
    timings: list[tuple[str, str, int | None, int, float]]
    config: ExperimentConfig


# -- config files -------------------------------------------------------------


def config_from_dict(payload: Mapping) -> ExperimentConfig:
    data = dict(payload)
    corpus = data.pop("corpus", None)
    manifest, plan = None, None
    if corpus is not None:
        if not isinstance(corpus, Mapping):
            raise ValidationError("corpus section must be a mapping")
        if "manifest" in corpus:
            manifest = str(corpus["manifest"])
        if "plan" in corpus:
            raw_plan = corpus["plan"]
            plan = CorpusPlan.from_dict(raw_plan if raw_plan else {})
    tuple_fields = {
        "methods": str,
        "dimensions": int,
        "size_bins": int,
        "degree_bins": float,
        "density_band": float,
    }
    kwargs: dict = {"corpus_manifest": manifest, "corpus_plan": plan}
    for name, cast in tuple_fields.items():
        if name in data:
            kwargs[name] = tuple(cast(x) for x in data.pop(name))
    for name in (
        "hide_fraction",
        "preserve_connectivity",
        "trials",
        "seed",
        "precision_k",
        "map_mode",
        "baseline_trials",
        "workers",
        "output",
        "method_params",
        "decoders",
        "save_embeddings",
        "save_splits",
    ):
        if name in data:
            kwargs[name] = data.pop(name)
    if data:
        raise ValidationError(f"unknown config field(s): {sorted(data)}")
    config = ExperimentConfig(**kwargs)
    config = _apply_env_overrides(config)
    config.validate()
    return config


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        payload = yaml.safe_load(fh)
    if not isinstance(payload, Mapping):
        raise ValidationError(f"{path}: config must be a mapping")
    return config_from_dict(payload)


def _apply_env_overrides(config: ExperimentConfig) -> ExperimentConfig:
    if os.environ.get(ENV_SEED):
        config = replace(config, seed=int(os.environ[ENV_SEED]))
    if os.environ.get(ENV_WORKERS):
        config = replace(config, workers=int(os.environ[ENV_WORKERS]))
    return config


# -- method parameter resolution -----------------------------------------------


def resolve_method_params(config: ExperimentConfig, method: str):
    overrides = dict(config.method_params.get(method, {}))
    if method == emb.GRAPH_FACTORIZATION:
        params = emb.GfParams(**overrides)
    elif method == emb.HOPE:
        params = emb.HopeParams(**overrides)
    elif method == emb.SDNE:
        if "hidden_layers" in overrides:
            overrides["hidden_layers"] = tuple(overrides["hidden_layers"])
        params = emb.SdneParams(**overrides)
    else:
        if overrides:
            raise ValidationError(f"method {method!r} takes no parameters")
        params = None
    if params is not None:
        params.validate()
    return params


def _params_snapshot(params) -> str:
    if params is None:
        return "{}"
    return json.dumps(asdict(params), sort_keys=True)


# -- tasks ----------------------------------------------------------------------


@dataclass(frozen=True)
class _Task:
    kind: str  # "baseline" | "heuristic" | "embedding"
    member: CorpusMember
    method: str | None
    dimension: int | None
    trial: int
    config: ExperimentConfig

    def key(self):
        return (
            self.member.name,
            self.kind,
            self.method or "",
            self.dimension or 0,
            self.trial,
        )


def _split_for(task: _Task) -> EdgeSplit:
    seed = derive_seed(task.config.seed, "split", task.member.name, task.trial)
    return split_edges(
        task.member.graph,
        task.config.hide_fraction,
        seed=seed,
        preserve_connectivity=task.config.preserve_connectivity,
    )


def _task_seed(task: _Task) -> int:
    return derive_seed(
        task.config.seed,
        "task",
        task.member.name,
        task.method or task.kind,
        task.dimension if task.dimension is not None else "na",
        task.trial,
    )


def _embed(task: _Task, split: EdgeSplit) -> emb.EmbeddingResult:
    config = task.config
    params = resolve_method_params(config, task.method)
    seed = _task_seed(task)
    if task.method == emb.LAPLACIAN_EIGENMAPS:
        result = emb.embed_laplacian_eigenmaps_on_lcc(split.train, task.dimension)
    elif task.method == emb.GRAPH_FACTORIZATION:
        result = emb.embed_graph_factorization(
            split.train, task.dimension, params, seed=seed
        )
    elif task.method == emb.HOPE:
        result = emb.embed_hope(split.train, task.dimension, params)
    elif task.method == emb.SDNE:
        result = emb.embed_sdne(split.train, task.dimension, params, seed=seed)
    else:
        raise ValidationError(f"not an embedding method: {task.method!r}")
    override = config.decoders.get(task.method)
    if override and override != result.decoder:
        if override == emb.DECODER_RECONSTRUCTION and "reconstruction" not in result.extras:
            raise ValidationError(
                f"{task.method} cannot use the reconstruction decoder"
            )
        result.decoder = override
    return result


def _run_task(task: _Task):
    """Worker entry point: returns (key, payload dict) or (key, error)."""
    started = time.perf_counter()
    try:
        split = _split_for(task)
        config = task.config
        if task.kind == "baseline":
            if config.save_splits:
                out = Path(config.output) / "splits"
                out.mkdir(parents=True, exist_ok=True)
                split.dump(
                    out / f"{task.member.name}__t{task.trial}.train",
                    out / f"{task.member.name}__t{task.trial}.hidden",
                )
            seed = _task_seed(task)
            payload = {
                "random_p_at_k": random_baseline(
                    split,
                    METRIC_P_AT_K,
                    k=config.precision_k,
                    trials=config.baseline_trials,
                    seed=seed,
                ),
                "random_map": random_baseline(
                    split,
                    METRIC_MAP,
                    k=config.precision_k,
                    trials=config.baseline_trials,
                    seed=seed,
                    map_mode=MAP_MODE_ALL_NODES,
                ),
                "random_map_alt": random_baseline(
                    split,
                    METRIC_MAP,
                    k=config.precision_k,
                    trials=config.baseline_trials,
                    seed=seed,
                    map_mode=MAP_MODE_HIDDEN_NODES,
                ),
            }
        else:
            if task.kind == "heuristic":
                seed = None
                if task.method == heur.RANDOM_PREDICTOR:
                    seed = derive_seed(split.seed, "random-predictor")
                scores = heur.score_matrix(task.method, split.train, seed=seed)
                params_text = "{}"
                artifacts = None
            else:
                result = _embed(task, split)
                scores = emb.score_matrix(result)
                params_text = _params_snapshot(
                    resolve_method_params(task.config, task.method)
                )
                artifacts = result if config.save_embeddings else None
            metrics = split_metrics_from_scores(
                scores, split, k=config.precision_k
            )
            payload = {
                "map_all": metrics.map_all_nodes,
                "map_hidden": metrics.map_hidden_nodes,
                "p_at_k": metrics.p_at_k,
                "params": params_text,
            }
            if artifacts is not None:
                out = Path(config.output) / "embeddings"
                out.mkdir(parents=True, exist_ok=True)
                emb.save_embedding(
                    artifacts,
                    out
                    / f"{task.member.name}__{task.method}__d{task.dimension}"
                    f"__t{task.trial}.txt",
                )
        elapsed = time.perf_counter() - started
        return task.key(), {"ok": payload, "seconds": elapsed}
    except Exception as exc:  # quarantined per task
        elapsed = time.perf_counter() - started
        return task.key(), {
            "error": f"{type(exc).__name__}: {exc}",
            "seconds": elapsed,
        }


_WORKER_LIMITER = None


def _worker_init():
    # single-threaded BLAS per worker: no oversubscription, and results
    # match the inline path bit for bit
    global _WORKER_LIMITER
    _WORKER_LIMITER = threadpool_limits(limits=1)


def _execute(tasks: Sequence[_Task], workers: int) -> dict:
    results = {}
    if workers <= 1:
        with threadpool_limits(limits=1):
            for task in tasks:
                key, outcome = _run_task(task)
                results[key] = outcome
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_worker_init
        ) as pool:
            for key, outcome in pool.map(_run_task, tasks, chunksize=1):
                results[key] = outcome
    return results


# -- the experiment -------------------------------------------------------------


def resolve_corpus(config: ExperimentConfig) -> list[CorpusMember]:
    if config.corpus_manifest is not None:
        members = load_corpus(config.corpus_manifest)
    else:
        members = [
            CorpusMember(name=c.name, graph=c.graph, domain=c.domain)
            for c in build_synthetic_corpus(config.corpus_plan, config.seed)
        ]
    if not members:
        raise ValidationError("corpus is empty")
    return members


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the whole grid and aggregate. Deterministic in (config, seed)."""
    config.validate()
    # fail fast on bad hyperparameters before spawning work
    for method in config.methods:
        resolve_method_params(config, method)

    members = resolve_corpus(config)
    domains = {m.name: m.domain for m in members}

    tasks: list[_Task] = []
    for member in members:
        for trial in range(config.trials):
            tasks.append(
                _Task("baseline", member, None, None, trial, config)
            )
            for method in config.methods:
                if method in emb.EMBEDDING_METHODS:
                    for dim in config.dimensions:
                        tasks.append(
                            _Task("embedding", member, method, dim, trial, config)
                        )
                else:
                    tasks.append(
                        _Task("heuristic", member, method, None, trial, config)
                    )
    tasks.sort(key=lambda t: t.key())
    outcomes = _execute(tasks, config.workers)

    records: list[RunRecord] = []
    failures: list[TaskFailure] = []
    timings: list[tuple[str, str, int | None, int, float]] = []
    attempted: dict[str, int] = {}
    failed: dict[str, int] = {}

    baselines: dict[tuple[str, int], dict] = {}
    for task in tasks:
        outcome = outcomes[task.key()]
        label = task.method or "baseline"
        timings.append(
            (task.member.name, label, task.dimension, task.trial, outcome["seconds"])
        )
        if task.kind != "baseline":
            attempted[task.method] = attempted.get(task.method, 0) + 1
        if "error" in outcome:
            if task.kind == "baseline":
                raise RuntimeError(
                    f"random baseline failed on graph {task.member.name!r}: "
                    f"{outcome['error']}"
                )
            failed[task.method] = failed.get(task.method, 0) + 1
            failures.append(
                TaskFailure(
                    graph=task.member.name,
                    method=task.method,
                    dimension=task.dimension,
                    trial=task.trial,
                    error=outcome["error"],
                )
            )
        elif task.kind == "baseline":
            baselines[(task.member.name, task.trial)] = outcome["ok"]

    for method, total in attempted.items():
        if failed.get(method, 0) == total:
            summary = "; ".join(
                f"{f.graph}[d={f.dimension}]: {f.error}"
                for f in failures[:5]
                if f.method == method
            )
            raise RuntimeError(
                f"method {method!r} failed on all {total} tasks: {summary}"
            )

    stats = {m.name: (m.graph.n, m.graph.m) for m in members}
    for task in tasks:
        outcome = outcomes[task.key()]
        if task.kind == "baseline" or "error" in outcome:
            continue
        payload = outcome["ok"]
        base = baselines[(task.member.name, task.trial)]
        n, m = stats[task.member.name]
        density = 0.0 if n < 2 else 2.0 * m / (n * (n - 1))
        map_all, map_hidden = payload["map_all"], payload["map_hidden"]
        if config.map_mode == MAP_MODE_ALL_NODES:
            map_main, map_alt = map_all, map_hidden
            rnd_main, rnd_alt = base["random_map"], base["random_map_alt"]
        else:
            map_main, map_alt = map_hidden, map_all
            rnd_main, rnd_alt = base["random_map_alt"], base["random_map"]
        dims = (
            [task.dimension]
            if task.kind == "embedding"
            else list(config.dimensions)  # replicate: dimension-invariant
        )
        for dim in dims:
            records.append(
                RunRecord(
                    graph=task.member.name,
                    domain=task.member.domain,
                    n=n,
                    m=m,
                    density=density,
                    method=task.method,
                    dimension=dim,
                    trial=task.trial,
                    trial_seed=_task_seed(task),
                    map=map_main,
                    map_alt=map_alt,
                    p_at_k=payload["p_at_k"],
                    k=config.precision_k,
                    random_map=rnd_main,
                    random_map_alt=rnd_alt,
                    random_p_at_k=base["random_p_at_k"],
                    params=payload["params"],
                )
            )
    records.sort(key=RunRecord.sort_key)

    gfs_by_dimension, gfs_best = aggregate_gfs(records, domains)
    return ExperimentResult(
        records=records,
        failures=failures,
        gfs_by_dimension=gfs_by_dimension,
        gfs_best=gfs_best,
        domains=domains,
        timings=timings,
        config=config,
    )


def _metric_rows(records: Sequence[RunRecord]):
    rows, baseline_rows = [], []
    seen_baseline = set()
    for r in records:
        rows.append(
            MetricValue(r.graph, r.method, METRIC_MAP, r.map, r.trial, r.k, r.dimension)
        )
        rows.append(
            MetricValue(
                r.graph, r.method, METRIC_P_AT_K, r.p_at_k, r.trial, r.k, r.dimension
            )
        )
        if (r.graph, r.trial) not in seen_baseline:
            seen_baseline.add((r.graph, r.trial))
            baseline_rows.append(
                MetricValue(r.graph, "random_baseline", METRIC_MAP, r.random_map, r.trial)
            )
            baseline_rows.append(
                MetricValue(
                    r.graph, "random_baseline", METRIC_P_AT_K, r.random_p_at_k, r.trial
                )
            )
    return rows, baseline_rows


def aggregate_gfs(
    records: Sequence[RunRecord], domains: Mapping[str, str]
) -> tuple[dict[int, GfsReport], GfsReport]:
    """Per-dimension GFS reports plus a best-over-dimension roll-up."""
    by_dim: dict[int, list[RunRecord]] = {}
    for r in records:
        by_dim.setdefault(r.dimension, []).append(r)
    gfs_by_dimension = {}
    for dim in sorted(by_dim):
        rows, baseline_rows = _metric_rows(by_dim[dim])
        gfs_by_dimension[dim] = gfs_scores(rows, baseline_rows, domains)

    best_entries = {}
    domain_counts: dict[str, int] = {}
    for dim in sorted(gfs_by_dimension):
        report = gfs_by_dimension[dim]
        domain_counts = dict(report.domain_counts)
        for key, entry in report.entries.items():
            if key not in best_entries or entry.micro > best_entries[key][1].micro:
                best_entries[key] = (dim, entry)
    best = GfsReport(
        entries={key: entry for key, (dim, entry) in best_entries.items()},
        domain_counts=domain_counts,
    )
    return gfs_by_dimension, best


# -- persistence -----------------------------------------------------------------


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records(records: Sequence[RunRecord], path) -> None:
    """Flat results table: one row per record, fixed column order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            row = asdict(r)
            writer.writerow([_format_value(row[c]) for c in RECORD_COLUMNS])


def read_records(path) -> list[RunRecord]:
    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_COLUMNS:
            raise ValidationError(
                f"{path}: unexpected columns {reader.fieldnames}"
            )
        for row in reader:
            records.append(
                RunRecord(
                    graph=row["graph"],
                    domain=row["domain"],
                    n=int(row["n"]),
                    m=int(row["m"]),
                    density=float(row["density"]),
                    method=row["method"],
                    dimension=int(row["dimension"]),
                    trial=int(row["trial"]),
                    trial_seed=int(row["trial_seed"]),
                    map=float(row["map"]),
                    map_alt=float(row["map_alt"]),
                    p_at_k=float(row["p_at_k"]),
                    k=int(row["k"]),
                    random_map=float(row["random_map"]),
                    random_map_alt=float(row["random_map_alt"]),
                    random_p_at_k=float(row["random_p_at_k"]),
                    params=row["params"],
                )
            )
    return records


def write_failures(failures: Sequence[TaskFailure], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["graph", "method", "dimension", "trial", "error"])
        for f in failures:
            writer.writerow([f.graph, f.method, f.dimension, f.trial, f.error])


def write_timings(timings, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["graph", "method", "dimension", "trial", "seconds"])
        for row in timings:
            writer.writerow([_format_value(x) for x in row])


# -- the GFS report file ----------------------------------------------------------


def _trial_stats(values: Sequence[float]) -> tuple[float, float]:
    if len(values) < 2:
        return (float(values[0]) if values else 0.0), 0.0
    arr = np.asarray(values, dtype=np.float64)
    return float(arr.mean()), float(arr.std(ddof=1))


def format_gfs_table(
    records: Sequence[RunRecord],
    domains: Mapping[str, str],
    title: str,
) -> str:
    """Table text: methods x (micro | macro | per-domain) x (MAP | P@k).

    Cells show mean +/- std of the GFS score across trials (std 0 with a
    single trial).
    """
    trials = sorted({r.trial for r in records})
    per_trial: dict[int, GfsReport] = {}
    for trial in trials:
        subset = [r for r in records if r.trial == trial]
        rows, baseline_rows = _metric_rows(subset)
        per_trial[trial] = gfs_scores(rows, baseline_rows, domains)

    methods = sorted({r.method for r in records})
    domain_names = sorted({domains[r.graph] for r in records})
    k = records[0].k if records else 0
    scopes = ["micro", "macro"] + domain_names
    header = ["method"]
    for scope in scopes:
        header.append(f"{scope}-MAP")
        header.append(f"{scope}-P@{k}")

    lines = [title, "=" * len(title)]
    rows_text = [header]
    for method in methods:
        row = [method]
        for scope in scopes:
            for metric in (METRIC_MAP, METRIC_P_AT_K):
                values = []
                for trial in trials:
                    report = per_trial[trial]
                    if (method, metric) not in report.entries:
                        continue
                    entry = report.entries[(method, metric)]
                    if scope == "micro":
                        values.append(entry.micro)
                    elif scope == "macro":
                        values.append(entry.macro)
                    elif scope in entry.per_domain:
                        values.append(entry.per_domain[scope])
                if values:
                    mean, std = _trial_stats(values)
                    row.append(f"{mean:.4g}±{std:.3g}")
                else:
                    row.append("-")
        rows_text.append(row)

    widths = [
        max(len(r[i]) for r in rows_text) for i in range(len(header))
    ]
    for row in rows_text:
        lines.append(
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        )
    return "\n".join(lines)


def format_report(result_or_records, domains=None, config=None, failures=None) -> str:
    """Full report: one GFS table per dimension plus best-over-dimension."""
    if isinstance(result_or_records, ExperimentResult):
        records = result_or_records.records
        domains = result_or_records.domains
        config = result_or_records.config
        failures = result_or_records.failures
    else:
        records = list(result_or_records)
        if domains is None:
            domains = {r.graph: r.domain for r in records}
        failures = failures or []
    if not records:
        raise ValidationError("no records to report")

    sections = []
    k = records[0].k
    trials = len({r.trial for r in records})
    head = [
        "GFS-score report",
        f"precision k: {k}; trials: {trials}; "
        f"graphs: {len({r.graph for r in records})}",
        f"failed tasks excluded: {len(failures)}",
    ]
    sections.append("\n".join(head))

    dims = sorted({r.dimension for r in records})
    for dim in dims:
        subset = [r for r in records if r.dimension == dim]
        sections.append(
            format_gfs_table(subset, domains, f"GFS (dimension {dim})")
        )

    by_dim, best = aggregate_gfs(list(records), domains)
    best_lines = ["Best over dimensions (micro)", "=" * 28]
    for (method, metric), entry in sorted(best.entries.items()):
        scored = [
            (by_dim[d].entries[(method, metric)].micro, -d)
            for d in by_dim
            if (method, metric) in by_dim[d].entries
        ]
        best_dim = -max(scored)[1]
        best_lines.append(
            f"{method} {metric}: micro={entry.micro:.4g} at dimension {best_dim}"
        )
    sections.append("\n".join(best_lines))
    return "\n\n".join(sections) + "\n"


def emit_report(result: ExperimentResult, out_dir) -> dict[str, Path]:
    """Write the flat records table and the GFS report (plus failures)."""
    if not result.records:
        raise ValidationError("no records to report")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    records_path = out_dir / RECORDS_FILE
    write_records(result.records, records_path)
    paths["records"] = records_path
    report_path = out_dir / REPORT_FILE
    report_path.write_text(format_report(result), encoding="utf-8")
    paths["report"] = report_path
    if result.failures:
        failures_path = out_dir / FAILURES_FILE
        write_failures(result.failures, failures_path)
        paths["failures"] = failures_path
    timings_path = out_dir / TIMINGS_FILE
    write_timings(result.timings, timings_path)
    paths["timings"] = timings_path
    return paths


# -- plot-series emission -----------------------------------------------------------


def _nearest_bin(value: float, bins: Sequence[float]) -> float:
    return min(bins, key=lambda b: (abs(value - b), b))


def emit_plot_series(
    records: Sequence[RunRecord],
    metric: str,
    out_dir,
    size_bins: Sequence[int] = (256, 512, 1024),
    degree_bins: Sequence[float] = (3.0, 4.0, 5.0),
    density_band: tuple[float, float] = (3.0, 5.0),
) -> list[Path]:
    """One CSV per (panel, method): dimension, mean, std rows.

    Size-bin panels only admit graphs whose average degree lies in
    density_band; degree-bin panels pool all sizes. Panels without data
    for a method produce no file.
    """
    if metric not in (METRIC_MAP, METRIC_P_AT_K):
        raise ValidationError(f"unknown metric {metric!r}")
    if not records:
        return []
    out_dir = Path(out_dir) / metric
    out_dir.mkdir(parents=True, exist_ok=True)

    def metric_of(r: RunRecord) -> float:
        return r.map if metric == METRIC_MAP else r.p_at_k

    panels: dict[tuple[str, str, str], dict[str, dict[int, list[float]]]] = {}
    for r in records:
        avg_degree = 2.0 * r.m / r.n if r.n else 0.0
        assignments = []
        if density_band[0] <= avg_degree <= density_band[1]:
            size_bin = _nearest_bin(r.n, size_bins)
            assignments.append(("size", _fmt_num(size_bin)))
        degree_bin = _nearest_bin(avg_degree, degree_bins)
        assignments.append(("degree", _fmt_num(degree_bin)))
        for axis, bin_label in assignments:
            panel = panels.setdefault((r.domain, axis, bin_label), {})
            panel.setdefault(r.method, {}).setdefault(r.dimension, []).append(
                metric_of(r)
            )

    written = []
    for (domain, axis, bin_label), methods in sorted(panels.items()):
        for method, by_dim in sorted(methods.items()):
            path = out_dir / f"{domain}__{axis}{bin_label}__{method}.csv"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["dimension", "mean", "std"])
                for dim in sorted(by_dim):
                    mean, std = _trial_stats(by_dim[dim])
                    writer.writerow([dim, repr(mean), repr(std)])
            written.append(path)
    return written


def _fmt_num(x) -> str:
    f = float(x)
    return str(int(f)) if f.is_integer() else str(f)
