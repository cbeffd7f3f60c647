"""Corpus manifests: named, domain-labeled edge-list files on disk.

A corpus directory holds one edge-list file per graph plus a YAML manifest
with one record per graph: {name, path, domain} at minimum, optionally
structural stats and full generator provenance for synthetic corpora.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import yaml

from .exceptions import ParseError, ValidationError
from .generators import CorpusGraph
from .graph import Graph, canonical_domain, compute_stats, load_edge_list, save_edge_list

MANIFEST_NAME = "manifest.yaml"


@dataclass(frozen=True)
class ManifestRecord:
    name: str
    path: str  # relative to the manifest's directory
    domain: str
    n: int | None = None
    m: int | None = None
    generator: dict | None = None

    def to_dict(self) -> dict:
        record = {"name": self.name, "path": self.path, "domain": self.domain}
        if self.n is not None:
            record["n"] = self.n
        if self.m is not None:
            record["m"] = self.m
        if self.generator is not None:
            record["generator"] = self.generator
        return record


@dataclass(frozen=True)
class CorpusMember:
    """A loaded corpus graph ready for the harness."""

    name: str
    graph: Graph
    domain: str


def write_manifest(records: Sequence[ManifestRecord], path) -> None:
    payload = {"graphs": [r.to_dict() for r in records]}
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(payload, fh, sort_keys=False)


def read_manifest(path) -> list[ManifestRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = yaml.safe_load(fh)
    if not isinstance(payload, dict) or "graphs" not in payload:
        raise ParseError(f"{path}: manifest must be a mapping with a 'graphs' list")
    records = []
    names = set()
    for i, raw in enumerate(payload["graphs"]):
        if not isinstance(raw, dict):
            raise ParseError(f"{path}: graph record {i} is not a mapping")
        missing = {"name", "path", "domain"} - set(raw)
        if missing:
            raise ParseError(
                f"{path}: graph record {i} is missing {sorted(missing)}"
            )
        name = str(raw["name"])
        if name in names:
            raise ValidationError(f"{path}: duplicate graph name {name!r}")
        names.add(name)
        records.append(
            ManifestRecord(
                name=name,
                path=str(raw["path"]),
                domain=canonical_domain(raw["domain"]),
                n=raw.get("n"),
                m=raw.get("m"),
                generator=raw.get("generator"),
            )
        )
    return records


def load_corpus(manifest_path) -> list[CorpusMember]:
    """Load every graph a manifest references (paths relative to it)."""
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    members = []
    for record in read_manifest(manifest_path):
        graph = load_edge_list(base / record.path, n_hint=record.n)
        members.append(
            CorpusMember(name=record.name, graph=graph, domain=record.domain)
        )
    return members


def save_corpus(
    items: Iterable[CorpusGraph], out_dir, with_stats: bool = True
) -> Path:
    """Write a generated corpus: edge lists under graphs/ plus the manifest."""
    out_dir = Path(out_dir)
    graph_dir = out_dir / "graphs"
    graph_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for item in items:
        rel = f"graphs/{item.name}.edges"
        save_edge_list(item.graph, out_dir / rel)
        generator = item.spec.to_dict() if item.spec is not None else None
        record = ManifestRecord(
            name=item.name,
            path=rel,
            domain=item.domain,
            n=item.graph.n,
            m=item.graph.m,
            generator=generator,
        )
        if with_stats:
            stats = compute_stats(item.graph)
            extra = record.to_dict()
            extra["avg_degree"] = round(stats.avg_degree, 6)
            extra["density"] = round(stats.density, 8)
            extra["num_components"] = stats.num_components
            records.append(extra)
        else:
            records.append(record.to_dict())
    manifest_path = out_dir / MANIFEST_NAME
    with open(manifest_path, "w", encoding="utf-8") as fh:
        yaml.safe_dump({"graphs": records}, fh, sort_keys=False)
    return manifest_path


def ingest_corpus(
    src_dir, out_dir, manifest_path=None
) -> Path:
    """Normalize an external edge-list directory into a corpus directory.

    With a manifest, its records select and label the files; without one,
    every *.edges / *.txt / *.edgelist file is taken with domain "other".
    Graphs are re-saved canonically (sorted, deduplicated, symmetrized).
    """
    src_dir = Path(src_dir)
    out_dir = Path(out_dir)
    graph_dir = out_dir / "graphs"
    graph_dir.mkdir(parents=True, exist_ok=True)

    if manifest_path is not None:
        sources = [
            (r.name, src_dir / r.path, r.domain, r.n)
            for r in read_manifest(manifest_path)
        ]
    else:
        files = sorted(
            p
            for pattern in ("*.edges", "*.txt", "*.edgelist")
            for p in src_dir.glob(pattern)
        )
        if not files:
            raise ValidationError(f"no edge-list files found in {src_dir}")
        sources = [(p.stem, p, canonical_domain("other"), None) for p in files]

    records = []
    for name, path, domain, n_hint in sources:
        graph = load_edge_list(path, n_hint=n_hint)
        rel = f"graphs/{name}.edges"
        save_edge_list(graph, out_dir / rel)
        stats = compute_stats(graph)
        records.append(
            {
                "name": name,
                "path": rel,
                "domain": domain,
                "n": graph.n,
                "m": graph.m,
                "avg_degree": round(stats.avg_degree, 6),
                "density": round(stats.density, 8),
                "num_components": stats.num_components,
            }
        )
    out_manifest = out_dir / MANIFEST_NAME
    with open(out_manifest, "w", encoding="utf-8") as fh:
        yaml.safe_dump({"graphs": records}, fh, sort_keys=False)
    return out_manifest
