"""Read-only HTTP API over a built index.

Endpoints (GET only):

    /api/v1/citations/{doi}        incoming citations of a DOI
    /api/v1/references/{doi}       outgoing citations of a DOI
    /api/v1/citation/{oci}         one citation by identifier
    /api/v1/citation-count/{doi}   incoming count
    /api/v1/metadata/{doi}         resource metadata
    /api/v1/stats                  corpus statistics

DOIs appear raw in paths (they contain "/"): the router matches the
longest remainder after the endpoint prefix, percent-decoding first.
Unknown DOIs yield empty lists or zero counts with 200; unparseable
identifiers and unknown citation identifiers yield 404 with a JSON error
body naming the error. Every successful response carries the CC0 license
marker. The index is immutable, so any number of requests may be served
concurrently and identical requests get byte-identical responses.
"""

from __future__ import annotations

import csv
import io
import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote

from . import LICENSE_ID
from .errors import BindFailure, OcixError
from .identifiers import normalize_doi
from .index import CitationIndex, CitationRecord, CSV_HEADER, _csv_row
from .ingestion import resource_to_dict
from .metrics import corpus_stats

__all__ = ["IndexHTTPServer", "http_serve"]

_API = "/api/v1/"


class IndexHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], index: CitationIndex) -> None:
        self.index = index
        self.stats_payload = {**corpus_stats(index).to_dict(), "license": LICENSE_ID}
        super().__init__(address, _Handler)


def http_serve(index: CitationIndex, port: int, host: str = "127.0.0.1") -> IndexHTTPServer:
    """Bind the service; call serve_forever() on the result to run it.
    Raises BindFailure when the port is unavailable."""
    try:
        return IndexHTTPServer((host, port), index)
    except OSError as exc:
        raise BindFailure(f"cannot bind {host}:{port}: {exc}") from exc


def _records_csv(records: list[CitationRecord]) -> str:
    sink = io.StringIO()
    sink.write(f"# license: {LICENSE_ID}\n")
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in sorted(records, key=lambda record: str(record.oci)):
        writer.writerow(_csv_row(record))
    return sink.getvalue()


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: IndexHTTPServer

    def log_message(self, format: str, *args) -> None:  # noqa: A002 - stdlib signature
        pass

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _json(self, status: int, payload: dict) -> None:
        self._send(status, json.dumps(payload).encode("utf-8"),
                   "application/json; charset=utf-8")

    def _csv(self, text: str) -> None:
        self._send(200, text.encode("utf-8"), "text/csv; charset=utf-8")

    def _error(self, name: str) -> None:
        self._json(404, {"error": name})

    def do_GET(self) -> None:
        path, _, query = self.path.partition("?")
        path = unquote(path)
        wants_csv = parse_qs(query).get("format", [""])[0] == "csv"
        index = self.server.index

        if path == _API + "stats":
            self._json(200, self.server.stats_payload)
            return

        for prefix, handler in (
            (_API + "citation-count/", self._citation_count),
            (_API + "citations/", self._citations),
            (_API + "citation/", self._citation),
            (_API + "references/", self._references),
            (_API + "metadata/", self._metadata),
        ):
            if path.startswith(prefix):
                handler(index, path[len(prefix):], wants_csv)
                return
        self._error("NotFound")

    def _parse_doi(self, raw: str):
        try:
            return normalize_doi(raw)
        except OcixError as exc:
            self._error(exc.name)
            return None

    def _citation_count(self, index: CitationIndex, raw: str, wants_csv: bool) -> None:
        doi = self._parse_doi(raw)
        if doi is not None:
            self._json(200, {"count": index.citation_count(doi), "license": LICENSE_ID})

    def _citations(self, index: CitationIndex, raw: str, wants_csv: bool) -> None:
        doi = self._parse_doi(raw)
        if doi is None:
            return
        records = index.lookup_citations(doi)
        if wants_csv:
            self._csv(_records_csv(records))
        else:
            self._json(200, {
                "license": LICENSE_ID,
                "count": len(records),
                "citations": [record.to_dict() for record in records],
            })

    def _references(self, index: CitationIndex, raw: str, wants_csv: bool) -> None:
        doi = self._parse_doi(raw)
        if doi is None:
            return
        records = index.lookup_references(doi)
        if wants_csv:
            self._csv(_records_csv(records))
        else:
            self._json(200, {
                "license": LICENSE_ID,
                "count": len(records),
                "references": [record.to_dict() for record in records],
            })

    def _citation(self, index: CitationIndex, raw: str, wants_csv: bool) -> None:
        try:
            record = index.lookup_by_oci(raw)
        except OcixError as exc:
            self._error(exc.name)
            return
        self._json(200, {**record.to_dict(), "license": LICENSE_ID})

    def _metadata(self, index: CitationIndex, raw: str, wants_csv: bool) -> None:
        doi = self._parse_doi(raw)
        if doi is None:
            return
        resource = index.resources.get(doi)
        if resource is None:
            self._error("UnknownDoi")
            return
        self._json(200, {**resource_to_dict(resource), "license": LICENSE_ID})

    def _refuse_write(self) -> None:
        self._json(405, {"error": "MethodNotAllowed"})

    do_POST = _refuse_write
    do_PUT = _refuse_write
    do_DELETE = _refuse_write
    do_PATCH = _refuse_write
