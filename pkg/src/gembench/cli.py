"""Command-line entry point.

Subcommands: generate (synthetic corpus), ingest (normalize external edge
lists), run (the experiment grid), report (recompute reports from a
records table), plot-data (per-panel metric series).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from . import harness
from .corpus import ingest_corpus, save_corpus
from .evaluation import METRIC_MAP, METRIC_P_AT_K
from .generators import CorpusPlan, build_synthetic_corpus


def _cmd_generate(args) -> int:
    if args.plan:
        with open(args.plan, "r", encoding="utf-8") as fh:
            plan = CorpusPlan.from_dict(yaml.safe_load(fh) or {})
    else:
        plan = CorpusPlan()
    corpus = build_synthetic_corpus(plan, args.seed)
    manifest = save_corpus(corpus, args.out)
    print(f"generated {len(corpus)} graphs; manifest: {manifest}")
    return 0


def _cmd_ingest(args) -> int:
    manifest = ingest_corpus(args.dir, args.out, manifest_path=args.manifest)
    print(f"ingested corpus; manifest: {manifest}")
    return 0


def _cmd_run(args) -> int:
    config = harness.load_config(args.config)
    overrides = {}
    if args.out:
        overrides["output"] = str(args.out)
    if args.workers:
        overrides["workers"] = args.workers
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    config.validate()
    result = harness.run_experiment(config)
    paths = harness.emit_report(result, config.output)
    series = harness.emit_plot_series(
        result.records,
        METRIC_MAP,
        Path(config.output) / "plots",
        size_bins=config.size_bins,
        degree_bins=config.degree_bins,
        density_band=config.density_band,
    )
    series += harness.emit_plot_series(
        result.records,
        METRIC_P_AT_K,
        Path(config.output) / "plots",
        size_bins=config.size_bins,
        degree_bins=config.degree_bins,
        density_band=config.density_band,
    )
    print(
        f"ran {len(result.records)} records "
        f"({len(result.failures)} failed tasks); "
        f"records: {paths['records']}; report: {paths['report']}; "
        f"plot series: {len(series)} files"
    )
    return 0


def _cmd_report(args) -> int:
    records_path = Path(args.records) / harness.RECORDS_FILE
    records = harness.read_records(records_path)
    text = harness.format_report(records)
    out = Path(args.records) / harness.REPORT_FILE
    out.write_text(text, encoding="utf-8")
    print(text)
    print(f"report written to {out}")
    return 0


def _cmd_plot_data(args) -> int:
    records_path = Path(args.records) / harness.RECORDS_FILE
    records = harness.read_records(records_path)
    metric = METRIC_MAP if args.metric == "map" else METRIC_P_AT_K
    out = Path(args.out) if args.out else Path(args.records) / "plots"
    written = harness.emit_plot_series(
        records,
        metric,
        out,
        size_bins=tuple(args.size_bins)
        if args.size_bins
        else (256, 512, 1024),
        degree_bins=tuple(args.degree_bins)
        if args.degree_bins
        else (3.0, 4.0, 5.0),
    )
    print(f"wrote {len(written)} series files under {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gembench",
        description="Benchmark graph-embedding and heuristic link prediction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a synthetic corpus")
    p.add_argument("--plan", help="YAML corpus plan (defaults built in)")
    p.add_argument("--out", required=True, help="output corpus directory")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("ingest", help="normalize an external corpus")
    p.add_argument("--dir", required=True, help="directory of edge lists")
    p.add_argument("--manifest", help="manifest describing the inputs")
    p.add_argument("--out", required=True, help="output corpus directory")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("run", help="run the experiment grid")
    p.add_argument("--config", required=True, help="YAML experiment config")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--seed", type=int, help="master seed (overrides config)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("report", help="recompute reports from records.csv")
    p.add_argument("--records", required=True, help="directory with records.csv")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("plot-data", help="emit per-panel metric series")
    p.add_argument("--records", required=True, help="directory with records.csv")
    p.add_argument("--metric", choices=("map", "p_at_k"), required=True)
    p.add_argument("--out", help="output directory (default <records>/plots)")
    p.add_argument("--size-bins", type=int, nargs="+")
    p.add_argument("--degree-bins", type=float, nargs="+")
    p.set_defaults(func=_cmd_plot_data)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
