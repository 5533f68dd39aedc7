from __future__ import annotations

import io

import pytest

from ocix.index import build_index
from ocix.ingestion import ingest_stream
from ocix.rdf_export import (
    CITATION_IRI_BASE,
    CITO,
    INSTITUTIONAL_SELF_CITATION_CLASS,
    RDF_TYPE,
    XSD,
    Literal,
    Triple,
    citation_to_triples,
    iter_ntriples_lines,
    render_triple,
    serialize_ntriples,
)

from _ntriples import NTriplesSyntaxError, parse_document, parse_line
from _synth import synth_corpus_lines
from test_index import resource


def triple_count(record) -> int:
    return (
        3
        + (record.creation is not None)
        + (record.timespan is not None)
        + len(record.self_citation)
    )


class TestCitationToTriples:
    def test_plain_citation_has_five_triples(self):
        index = build_index([
            resource("10.1/a", date="2020", refs=["10.1/b"]),
            resource("10.1/b", date="2018"),
        ])
        [record] = index.iter_citations()
        triples = citation_to_triples(record)
        assert len(triples) == 5
        subjects = {t.subject for t in triples}
        assert subjects == {CITATION_IRI_BASE + record.oci.local_part}

    def test_self_citation_classes_add_type_triples(self):
        index = build_index([
            resource("10.1/a", date="2020", refs=["10.1/b"],
                     orcids=["0000-0002-0000-0001"], issns=["1111-2222"]),
            resource("10.1/b", date="2018",
                     orcids=["0000-0002-0000-0001"], issns=["1111-2222"]),
        ])
        [record] = index.iter_citations()
        triples = citation_to_triples(record)
        assert len(triples) == 7
        types = {t.obj for t in triples if t.predicate == RDF_TYPE}
        assert CITO + "AuthorSelfCitation" in types
        assert CITO + "JournalSelfCitation" in types

    def test_dangling_without_creation_has_three(self):
        index = build_index([resource("10.1/a", refs=["10.9/zz"])])
        [record] = index.iter_citations()
        assert len(citation_to_triples(record)) == 3

    def test_creation_datatype_tracks_precision(self):
        for date, datatype in [("2020", "gYear"), ("2020-03", "gYearMonth"),
                               ("2020-03-15", "date")]:
            index = build_index([
                resource("10.1/a", date=date, refs=["10.1/b"]),
                resource("10.1/b"),
            ])
            [record] = index.iter_citations()
            literals = [t.obj for t in citation_to_triples(record)
                        if isinstance(t.obj, Literal)]
            assert literals == [Literal(date, XSD + datatype)]

    def test_institutional_class_is_locally_minted(self):
        index = build_index([
            resource("10.1/a", refs=["10.1/b"], rors=["https://ror.org/05gq02987"]),
            resource("10.1/b", rors=["https://ror.org/05gq02987"]),
        ])
        [record] = index.iter_citations()
        types = {t.obj for t in citation_to_triples(record) if t.predicate == RDF_TYPE}
        assert INSTITUTIONAL_SELF_CITATION_CLASS in types


class TestSerialization:
    def test_empty_index_is_empty_output(self):
        sink = io.StringIO()
        assert serialize_ntriples(build_index([]), sink) == 0
        assert sink.getvalue() == ""

    def test_two_record_corpus_has_five_lines(self):
        index = build_index([
            resource("10.1/a", date="2020", refs=["10.1/b"]),
            resource("10.1/b", date="2018"),
        ])
        sink = io.StringIO()
        assert serialize_ntriples(index, sink) == 5
        assert len(sink.getvalue().splitlines()) == 5

    def test_reserialization_is_byte_identical(self):
        resources, _ = ingest_stream(synth_corpus_lines(200, seed=4))
        index = build_index(resources)
        one, two = io.StringIO(), io.StringIO()
        serialize_ntriples(index, one)
        serialize_ntriples(index, two)
        assert one.getvalue() == two.getvalue()

    def test_every_line_passes_independent_grammar_checker(self):
        resources, _ = ingest_stream(synth_corpus_lines(300, seed=9))
        index = build_index(resources)
        text = io.StringIO()
        count = serialize_ntriples(index, text)
        parsed = parse_document(text.getvalue())
        assert len(parsed) == count

    def test_triple_count_formula_exact(self):
        resources, _ = ingest_stream(synth_corpus_lines(300, seed=9))
        index = build_index(resources)
        expected = sum(triple_count(record) for record in index.iter_citations())
        assert serialize_ntriples(index, io.StringIO()) == expected

    def test_lines_sorted_by_token_triple(self):
        resources, _ = ingest_stream(synth_corpus_lines(300, seed=10))
        index = build_index(resources)
        tokens = [parse_line(line) for line in iter_ntriples_lines(index)]
        assert tokens == sorted(tokens)

    def test_distinct_subject_count_equals_record_count(self):
        resources, _ = ingest_stream(synth_corpus_lines(250, seed=12))
        index = build_index(resources)
        subjects = {parse_line(line)[0] for line in iter_ntriples_lines(index)}
        assert len(subjects) == index.total_citations


class TestRendering:
    def test_iri_escaping(self):
        line = render_triple(Triple("https://doi.org/10.1/a<b>", RDF_TYPE, CITO + "Citation"))
        assert "\\u003C" in line and "\\u003E" in line
        parse_line(line)

    def test_literal_escaping(self):
        line = render_triple(
            Triple("https://example.org/s", "https://example.org/p",
                   Literal('say "hi"\n', XSD + "string"))
        )
        assert '\\"hi\\"' in line and "\\n" in line
        parse_line(line)

    def test_checker_rejects_junk(self):
        with pytest.raises(NTriplesSyntaxError):
            parse_line("<https://a> <https://b> missing-brackets .")
        with pytest.raises(NTriplesSyntaxError):
            parse_line("<https://a> <https://b> <https://c>")  # no dot
        with pytest.raises(NTriplesSyntaxError):
            parse_line("<relative> <https://b> <https://c> .")
