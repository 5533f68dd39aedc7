"""Command-line interface.

    ocix ingest INPUT --store-dir DIR [--source URI] [--agent NAME] [--no-provenance]
    ocix build --store-dir DIR --index-dir DIR [--agent NAME] [--no-provenance]
    ocix export --index-dir DIR --format {csv,nt} --output FILE
    ocix stats --index-dir DIR [--reference-set FILE]... [--report-dir DIR]
    ocix query --index-dir DIR (--citations DOI | --references DOI | --count DOI | --oci OCI)
    ocix serve --index-dir DIR [--port N] [--host HOST]

Exit codes: 0 success, 1 usage error, 2 data error. Data errors print
their structured name on stderr ("MalformedOci: ..."). The INDEX_DIR and
PORT environment variables supply defaults for --index-dir and --port.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

from . import LICENSE_ID, __version__
from .errors import OcixError
from .identifiers import normalize_doi
from .index import build_index, write_citations_csv
from .ingestion import ingest_stream
from .metrics import corpus_stats, coverage, read_reference_set
from .provenance import PROVENANCE_FILENAME, ProvenanceLedger
from .rdf_export import serialize_ntriples
from .service import http_serve
from .storage import (
    INGEST_REPORT_FILENAME,
    RESOURCES_FILENAME,
    load_index,
    load_resources,
    save_index,
    write_ingest_report,
    write_resources,
)

DEFAULT_AGENT = f"ocix/{__version__}"


class _Usage(Exception):
    """Bad invocation detected after argument parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _now() -> datetime.datetime:
    return datetime.datetime.now(datetime.timezone.utc)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ocix", description="Open DOI-to-DOI citation index engine")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_index_dir(sub: argparse.ArgumentParser) -> None:
        sub.add_argument(
            "--index-dir",
            default=os.environ.get("INDEX_DIR"),
            help="built index directory (default: $INDEX_DIR)",
        )

    ingest = commands.add_parser("ingest", help="parse a dump into a resource store")
    ingest.add_argument("input", help="JSON Lines dump file, or - for stdin")
    ingest.add_argument("--store-dir", required=True)
    ingest.add_argument("--source", help="provenance source URI (default: file:INPUT)")
    ingest.add_argument("--agent", default=DEFAULT_AGENT)
    ingest.add_argument("--no-provenance", action="store_true",
                        help="skip provenance stamping (bulk runs)")

    build = commands.add_parser("build", help="build the citation index from a store")
    build.add_argument("--store-dir", required=True)
    add_index_dir(build)
    build.add_argument("--agent", default=DEFAULT_AGENT)
    build.add_argument("--no-provenance", action="store_true")

    export = commands.add_parser("export", help="export the index as CSV or N-Triples")
    add_index_dir(export)
    export.add_argument("--format", required=True, choices=("csv", "nt"))
    export.add_argument("--output", required=True)

    stats = commands.add_parser("stats", help="corpus statistics and coverage")
    add_index_dir(stats)
    stats.add_argument("--reference-set", action="append", default=[],
                       metavar="FILE", help="citing,cited CSV; repeatable")
    stats.add_argument("--report-dir", help="write stats.csv and figures here")

    query = commands.add_parser("query", help="query a built index")
    add_index_dir(query)
    what = query.add_mutually_exclusive_group(required=True)
    what.add_argument("--citations", metavar="DOI", help="incoming citations")
    what.add_argument("--references", metavar="DOI", help="outgoing citations")
    what.add_argument("--count", metavar="DOI", help="incoming citation count")
    what.add_argument("--oci", metavar="OCI", help="one citation by identifier")
    query.add_argument("--format", choices=("json", "csv"), default="json")

    serve = commands.add_parser("serve", help="read-only HTTP API")
    add_index_dir(serve)
    serve.add_argument("--port", type=int, default=int(os.environ.get("PORT", "8080")))
    serve.add_argument("--host", default="127.0.0.1")

    return parser


def _require_index_dir(args: argparse.Namespace) -> Path:
    if not args.index_dir:
        raise _Usage("--index-dir is required (or set INDEX_DIR)")
    return Path(args.index_dir)


def _cmd_ingest(args: argparse.Namespace) -> int:
    store_dir = Path(args.store_dir)
    store_dir.mkdir(parents=True, exist_ok=True)
    source = args.source or ("stdin" if args.input == "-" else f"file:{args.input}")

    if args.input == "-":
        resources, report = ingest_stream(sys.stdin)
    else:
        with open(args.input, "r", encoding="utf-8", errors="replace") as handle:
            resources, report = ingest_stream(handle)

    write_resources(resources, store_dir / RESOURCES_FILENAME)
    write_ingest_report(report, store_dir / INGEST_REPORT_FILENAME)

    if not args.no_provenance:
        ledger = ProvenanceLedger()
        at = _now()
        for resource in resources:
            ledger.record_creation(str(resource.doi), source, args.agent, at)
        ledger.save(store_dir / PROVENANCE_FILENAME)

    json.dump(report.to_dict(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    store_dir = Path(args.store_dir)
    index_dir = _require_index_dir(args)
    resources = load_resources(store_dir / RESOURCES_FILENAME)
    index = build_index(resources)
    save_index(index, index_dir)

    if not args.no_provenance:
        store_ledger_path = store_dir / PROVENANCE_FILENAME
        if store_ledger_path.exists():
            ledger = ProvenanceLedger.load(store_ledger_path)
        else:
            ledger = ProvenanceLedger()
        at = _now()
        source = f"file:{store_dir / RESOURCES_FILENAME}"
        for doi in index.resources:
            if str(doi) not in ledger:
                ledger.record_creation(str(doi), source, args.agent, at)
        for record in index.iter_citations():
            ledger.record_creation(
                str(record.oci), source, args.agent, at,
                description="citation minted from corpus",
            )
        ledger.save(index_dir / PROVENANCE_FILENAME)

    json.dump(index.build_report.to_dict(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    index = load_index(_require_index_dir(args))
    if args.format == "csv":
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            count = write_citations_csv(index, handle, license_comment=LICENSE_ID)
        unit = "rows"
    else:
        with open(args.output, "w", encoding="utf-8") as handle:
            count = serialize_ntriples(index, handle)
        unit = "triples"
    sys.stderr.write(f"wrote {count} {unit} to {args.output} (license {LICENSE_ID})\n")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    index = load_index(_require_index_dir(args))
    stats = corpus_stats(index)
    payload: dict = {**stats.to_dict(), "license": LICENSE_ID}

    coverage_results: dict[str, float] = {}
    for ref_path in args.reference_set:
        with open(ref_path, "r", encoding="utf-8", newline="") as handle:
            pairs = read_reference_set(handle)
        coverage_results[Path(ref_path).stem] = coverage(index, pairs)
    if coverage_results:
        payload["coverage"] = coverage_results

    if args.report_dir:
        from .report import write_stats_report

        written = write_stats_report(stats, Path(args.report_dir),
                                     coverage_results or None)
        for path in written:
            sys.stderr.write(f"wrote {path}\n")

    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _print_records(records, key: str, fmt: str) -> None:
    if fmt == "csv":
        from .service import _records_csv

        sys.stdout.write(_records_csv(records))
    else:
        json.dump(
            {"license": LICENSE_ID, "count": len(records),
             key: [record.to_dict() for record in records]},
            sys.stdout, indent=2, sort_keys=True,
        )
        sys.stdout.write("\n")


def _cmd_query(args: argparse.Namespace) -> int:
    index = load_index(_require_index_dir(args))
    if args.count is not None:
        print(index.citation_count(str(normalize_doi(args.count))))
    elif args.citations is not None:
        _print_records(index.lookup_citations(normalize_doi(args.citations)),
                       "citations", args.format)
    elif args.references is not None:
        _print_records(index.lookup_references(normalize_doi(args.references)),
                       "references", args.format)
    else:
        record = index.lookup_by_oci(args.oci)
        json.dump({**record.to_dict(), "license": LICENSE_ID},
                  sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    index = load_index(_require_index_dir(args))
    server = http_serve(index, args.port, args.host)
    host, port = server.server_address[:2]
    sys.stderr.write(f"serving read-only API on http://{host}:{port} (Ctrl-C stops)\n")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "build": _cmd_build,
    "export": _cmd_export,
    "stats": _cmd_stats,
    "query": _cmd_query,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _Usage as exc:
        sys.stderr.write(f"ocix {args.command}: error: {exc}\n")
        return 1
    except OcixError as exc:
        sys.stderr.write(f"{exc.name}: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"IoFailure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
