from __future__ import annotations

import io

import pytest

from ocix.errors import IoFailure
from ocix.index import build_index, write_citations_csv
from ocix.ingestion import ingest_stream
from ocix.rdf_export import serialize_ntriples
from ocix.storage import (
    BUILD_REPORT_FILENAME,
    CITATIONS_FILENAME,
    RESOURCES_FILENAME,
    load_index,
    load_resources,
    save_index,
    write_resources,
)

from _synth import synth_corpus_lines


def synth_resources(n=200, seed=17):
    resources, _ = ingest_stream(synth_corpus_lines(n, seed=seed))
    return resources


class TestResourceStore:
    def test_round_trip(self, tmp_path):
        resources = synth_resources()
        path = tmp_path / RESOURCES_FILENAME
        assert write_resources(resources, path) == len(resources)
        loaded = load_resources(path)
        assert sorted(loaded, key=lambda r: r.doi) == sorted(resources, key=lambda r: r.doi)

    def test_store_is_sorted_and_deterministic(self, tmp_path):
        resources = synth_resources()
        first, second = tmp_path / "one.jsonl", tmp_path / "two.jsonl"
        write_resources(resources, first)
        write_resources(list(reversed(resources)), second)
        assert first.read_bytes() == second.read_bytes()

    def test_load_rejects_dirty_store(self, tmp_path):
        path = tmp_path / RESOURCES_FILENAME
        path.write_text('{"doi":"10.1/a"}\nnot json\n', encoding="utf-8")
        with pytest.raises(IoFailure):
            load_resources(path)

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            load_resources(tmp_path / "absent.jsonl")


class TestIndexDir:
    def test_save_then_load_reproduces_exports(self, tmp_path):
        index = build_index(synth_resources())
        save_index(index, tmp_path)
        assert (tmp_path / CITATIONS_FILENAME).exists()
        assert (tmp_path / BUILD_REPORT_FILENAME).exists()

        loaded = load_index(tmp_path)
        original_csv, loaded_csv = io.StringIO(), io.StringIO()
        write_citations_csv(index, original_csv)
        write_citations_csv(loaded, loaded_csv)
        assert original_csv.getvalue() == loaded_csv.getvalue()

        original_nt, loaded_nt = io.StringIO(), io.StringIO()
        serialize_ntriples(index, original_nt)
        serialize_ntriples(loaded, loaded_nt)
        assert original_nt.getvalue() == loaded_nt.getvalue()

    def test_materialized_csv_matches_export(self, tmp_path):
        index = build_index(synth_resources(seed=23))
        save_index(index, tmp_path)
        sink = io.StringIO()
        write_citations_csv(index, sink)
        assert (tmp_path / CITATIONS_FILENAME).read_text(encoding="utf-8") == sink.getvalue()

    def test_load_missing_index(self, tmp_path):
        with pytest.raises(IoFailure):
            load_index(tmp_path / "nowhere")
