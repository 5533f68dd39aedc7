from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ocix.errors import InvalidDoi, IoFailure, MalformedRecord
from ocix.ingestion import BibResource, ingest_stream, parse_record, resource_to_dict


def line(**fields) -> str:
    return json.dumps(fields)


class TestParseRecord:
    def test_normalizes_and_deduplicates_references(self):
        parsed = parse_record(line(doi="10.1/A", date="2020", references=["10.2/b", "10.2/B"]))
        assert parsed.resource.doi == "10.1/a"
        assert parsed.resource.references == ("10.2/b",)
        assert parsed.duplicate_references_dropped == 1
        assert parsed.resource.pub_date.year == 2020

    def test_drops_self_reference(self):
        parsed = parse_record(line(doi="10.1/a", references=["10.1/a"]))
        assert parsed.resource.references == ()
        assert parsed.self_references_dropped == 1

    def test_rejects_invalid_own_doi(self):
        with pytest.raises(InvalidDoi):
            parse_record(line(doi="11.9/x"))

    def test_invalid_references_dropped_individually(self):
        parsed = parse_record(line(doi="10.1/a", references=["bogus", "10.2/b", "also bad"]))
        assert parsed.resource.references == ("10.2/b",)
        assert parsed.invalid_references_dropped == 2

    @pytest.mark.parametrize(
        "bad",
        [
            "not json at all",
            "[1, 2]",
            '"10.1/a"',
            line(title="no doi"),
            line(doi=42),
            line(doi="10.1/a", date="2020-1"),
            line(doi="10.1/a", date=2020),
            line(doi="10.1/a", references="10.2/b"),
            line(doi="10.1/a", orcids=[123]),
            line(doi="10.1/a", title=["x"]),
        ],
    )
    def test_malformed_records(self, bad):
        with pytest.raises(MalformedRecord):
            parse_record(bad)

    def test_identifier_shape_filtering(self):
        parsed = parse_record(
            line(
                doi="10.1/a",
                orcids=["0000-0002-0000-0001", "not-an-orcid", "0000-0002-0000-000X"],
                issns=["1234-5678", "12345678", "9999-000X"],
                rors=["https://ror.org/05gq02987", ""],
            )
        )
        res = parsed.resource
        assert res.author_orcids == {"0000-0002-0000-0001", "0000-0002-0000-000X"}
        assert res.issns == {"1234-5678", "9999-000X"}
        assert res.ror_ids == {"https://ror.org/05gq02987"}

    def test_unknown_fields_ignored(self):
        parsed = parse_record(line(doi="10.1/a", container="Journal of X", volume=3))
        assert parsed.resource.doi == "10.1/a"

    def test_references_sorted(self):
        parsed = parse_record(line(doi="10.1/a", references=["10.9/z", "10.2/b", "10.5/m"]))
        assert parsed.resource.references == ("10.2/b", "10.5/m", "10.9/z")


class TestIngestStream:
    def test_three_well_formed_lines(self):
        lines = [line(doi=f"10.1/{c}") for c in "abc"]
        resources, report = ingest_stream(lines)
        assert len(resources) == 3
        assert report.lines_read == 3
        assert report.resources_accepted == 3
        assert report.malformed_lines == 0
        assert report.records_merged == 0
        assert report.invalid_dois == 0

    def test_garbage_line_is_counted_not_fatal(self):
        lines = [line(doi="10.1/a"), "ceci n'est pas du JSON", line(doi="10.1/b")]
        resources, report = ingest_stream(lines)
        assert len(resources) == 2
        assert report.malformed_lines == 1
        assert report.samples["malformed"] == [2]

    def test_duplicate_doi_merges_references_as_union(self):
        lines = [
            line(doi="10.1/a", references=["10.2/b"]),
            line(doi="10.1/a", references=["10.3/c"]),
        ]
        resources, report = ingest_stream(lines)
        assert len(resources) == 1
        assert resources[0].references == ("10.2/b", "10.3/c")
        assert report.records_merged == 1
        assert report.resources_accepted == 1

    def test_merge_scalar_last_non_empty_wins(self):
        lines = [
            line(doi="10.1/a", title="first", date="2019"),
            line(doi="10.1/a", title="second"),
            line(doi="10.1/a", date="2020-01"),
        ]
        resources, _ = ingest_stream(lines)
        assert resources[0].title == "second"
        assert str(resources[0].pub_date) == "2020-01"

    def test_invalid_own_doi_counts_as_malformed_and_invalid(self):
        lines = [line(doi="11.9/x"), line(doi="10.1/a")]
        resources, report = ingest_stream(lines)
        assert len(resources) == 1
        assert report.malformed_lines == 1
        assert report.invalid_dois == 1
        assert report.samples["invalid_doi"] == [1]

    def test_blank_lines_skipped_and_counted(self):
        lines = [line(doi="10.1/a"), "", "   \t", line(doi="10.1/b")]
        resources, report = ingest_stream(lines)
        assert len(resources) == 2
        assert report.blank_lines == 2
        assert report.resources_accepted == 2

    def test_report_arithmetic(self):
        lines = [
            line(doi="10.1/a"),
            "garbage",
            line(doi="10.1/a", title="again"),
            line(doi="10.1/b"),
            line(doi="11.0/bad"),
        ]
        _, report = ingest_stream(lines)
        assert report.lines_read == (
            report.resources_accepted
            + report.malformed_lines
            + report.records_merged
            + report.blank_lines
        )

    def test_io_failure_is_fatal(self):
        def failing():
            yield line(doi="10.1/a")
            raise OSError("disk on fire")

        with pytest.raises(IoFailure):
            ingest_stream(failing())

    def test_sample_cap(self):
        lines = ["junk"] * 250
        _, report = ingest_stream(lines)
        assert report.malformed_lines == 250
        assert len(report.samples["malformed"]) == 100

    def test_report_round_trips_to_json(self):
        _, report = ingest_stream([line(doi="10.1/a"), "junk"])
        payload = json.loads(json.dumps(report.to_dict()))
        assert payload["resources_accepted"] == 1
        assert payload["malformed_lines"] == 1


@st.composite
def non_conflicting_corpus(draw):
    """Records whose scalar fields never conflict per DOI, so any ingest
    order must produce the same final resources."""
    dois = draw(st.lists(st.sampled_from([f"10.{i}/x" for i in range(8)]), min_size=1,
                         max_size=8, unique=True))
    titles = {doi: draw(st.one_of(st.none(), st.just(f"title-{doi}"))) for doi in dois}
    records = []
    for doi in dois:
        for _ in range(draw(st.integers(min_value=1, max_value=3))):
            fields = {"doi": doi}
            if titles[doi] and draw(st.booleans()):
                fields["title"] = titles[doi]
            refs = draw(st.lists(st.sampled_from([f"10.{i}/x" for i in range(8)]),
                                 max_size=4))
            if refs:
                fields["references"] = refs
            records.append(json.dumps(fields))
    return records


@given(non_conflicting_corpus(), st.randoms())
def test_merge_is_order_independent(records, rng):
    shuffled = list(records)
    rng.shuffle(shuffled)
    first, _ = ingest_stream(records)
    second, _ = ingest_stream(shuffled)
    by_doi_first = {r.doi: r for r in first}
    by_doi_second = {r.doi: r for r in second}
    assert by_doi_first == by_doi_second


@given(non_conflicting_corpus())
def test_store_round_trip(records):
    resources, _ = ingest_stream(records)
    rewritten = [json.dumps(resource_to_dict(r)) for r in resources]
    again, report = ingest_stream(rewritten)
    assert again == resources
    assert report.malformed_lines == 0
    assert report.records_merged == 0
