"""On-disk layout for the resource store and the built index.

The store (written by ingest) and the index directory (written by build)
both keep resources as sorted, normalized JSON Lines in the same schema as
the input dumps, so a store is itself re-ingestable. The index directory
additionally materializes citations.csv for outside consumers and the
build report; loading an index rebuilds the adjacency deterministically
from the resource store, which cannot drift out of sync with derived
files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import IoFailure
from .index import CitationIndex, build_index, write_citations_csv
from .ingestion import BibResource, IngestReport, ingest_stream, resource_to_dict

__all__ = [
    "RESOURCES_FILENAME",
    "INGEST_REPORT_FILENAME",
    "CITATIONS_FILENAME",
    "BUILD_REPORT_FILENAME",
    "write_resources",
    "load_resources",
    "save_index",
    "load_index",
]

RESOURCES_FILENAME = "resources.jsonl"
INGEST_REPORT_FILENAME = "ingest_report.json"
CITATIONS_FILENAME = "citations.csv"
BUILD_REPORT_FILENAME = "build_report.json"


def write_resources(resources: list[BibResource], path: Path) -> int:
    """Write resources sorted by DOI, one JSON record per line."""
    try:
        with open(path, "w", encoding="utf-8") as handle:
            for resource in sorted(resources, key=lambda r: r.doi):
                handle.write(json.dumps(resource_to_dict(resource), separators=(",", ":")))
                handle.write("\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return len(resources)


def load_resources(path: Path) -> list[BibResource]:
    """Read a resource store; raises IoFailure when the file is unreadable
    or contains anything but clean records."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            resources, report = ingest_stream(handle)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    if report.malformed_lines or report.records_merged:
        raise IoFailure(
            f"{path} is not a clean resource store "
            f"({report.malformed_lines} malformed, {report.records_merged} merged)"
        )
    return resources


def write_ingest_report(report: IngestReport, path: Path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def save_index(index: CitationIndex, index_dir: Path) -> None:
    """Materialize a built index: resource store, citations.csv, report."""
    index_dir = Path(index_dir)
    index_dir.mkdir(parents=True, exist_ok=True)
    write_resources(list(index.resources.values()), index_dir / RESOURCES_FILENAME)
    try:
        with open(index_dir / CITATIONS_FILENAME, "w", encoding="utf-8", newline="") as handle:
            write_citations_csv(index, handle)
        with open(index_dir / BUILD_REPORT_FILENAME, "w", encoding="utf-8") as handle:
            json.dump(index.build_report.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def load_index(index_dir: Path) -> CitationIndex:
    """Load a built index directory for read-only use."""
    path = Path(index_dir) / RESOURCES_FILENAME
    if not path.exists():
        raise IoFailure(f"no index at {index_dir} (missing {RESOURCES_FILENAME})")
    return build_index(load_resources(path))
