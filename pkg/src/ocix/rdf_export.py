"""N-Triples serialization of the citation index.

Each citation becomes a typed resource under the citation namespace with
links to its citing and cited DOIs and optional creation-date and timespan
literals. Output is line-oriented, UTF-8, LF-terminated, and sorted by
(subject, predicate, object) token order, so re-serializing the same index
is byte-identical and large exports can be streamed and merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterator

from .dates import Precision
from .errors import IoFailure
from .index import CitationIndex, CitationRecord, SelfCitationType

__all__ = [
    "Triple",
    "Literal",
    "citation_to_triples",
    "serialize_ntriples",
    "iter_ntriples_lines",
    "RDF_TYPE",
    "CITO",
    "XSD",
    "DOI_IRI_BASE",
    "CITATION_IRI_BASE",
    "INSTITUTIONAL_SELF_CITATION_CLASS",
]

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
CITO = "http://purl.org/spar/cito/"
XSD = "http://www.w3.org/2001/XMLSchema#"

DOI_IRI_BASE = "https://doi.org/"
INDEX_IRI_BASE = "https://w3id.org/oc/index/"
CITATION_IRI_BASE = INDEX_IRI_BASE + "ci/"

CITO_CITATION = CITO + "Citation"
CITO_HAS_CITING_ENTITY = CITO + "hasCitingEntity"
CITO_HAS_CITED_ENTITY = CITO + "hasCitedEntity"
CITO_HAS_CREATION_DATE = CITO + "hasCitationCreationDate"
CITO_HAS_TIMESPAN = CITO + "hasCitationTimeSpan"

# CiTO has no institutional self-citation class; mint one in our namespace.
_SELF_CITATION_CLASS = {
    SelfCitationType.AUTHOR: CITO + "AuthorSelfCitation",
    SelfCitationType.JOURNAL: CITO + "JournalSelfCitation",
    SelfCitationType.INSTITUTIONAL: INDEX_IRI_BASE + "InstitutionalSelfCitation",
}
INSTITUTIONAL_SELF_CITATION_CLASS = _SELF_CITATION_CLASS[SelfCitationType.INSTITUTIONAL]

_DATE_DATATYPE = {
    Precision.YEAR: XSD + "gYear",
    Precision.MONTH: XSD + "gYearMonth",
    Precision.DAY: XSD + "date",
}


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str


@dataclass(frozen=True, slots=True)
class Triple:
    subject: str
    predicate: str
    obj: str | Literal


_ECHAR = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def _render_iri(iri: str) -> str:
    # IRIREF forbids controls, space, <>"{}|^` and backslash; escape as \uXXXX
    out = []
    for ch in iri:
        if ch <= " " or ch in '<>"{}|^`\\':
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return f"<{''.join(out)}>"


def _render_literal(literal: Literal) -> str:
    escaped = "".join(_ECHAR.get(ch, ch) for ch in literal.lexical)
    return f'"{escaped}"^^<{literal.datatype}>'


def _render_object(obj: str | Literal) -> str:
    return _render_literal(obj) if isinstance(obj, Literal) else _render_iri(obj)


def render_triple(triple: Triple) -> str:
    return f"{_render_iri(triple.subject)} {_render_iri(triple.predicate)} {_render_object(triple.obj)} ."


def citation_to_triples(record: CitationRecord) -> list[Triple]:
    """Map one citation record to its triples.

    Always: rdf:type plus the citing and cited links. One extra type triple
    per self-citation class, one creation-date literal when the creation is
    known (typed by its precision), one duration literal when the timespan
    exists. Total = 3 + [creation] + [timespan] + |self_citation|.
    """
    subject = CITATION_IRI_BASE + record.oci.local_part
    triples = [Triple(subject, RDF_TYPE, CITO_CITATION)]
    for self_citation in record.self_citation:
        triples.append(Triple(subject, RDF_TYPE, _SELF_CITATION_CLASS[self_citation]))
    triples.append(Triple(subject, CITO_HAS_CITING_ENTITY, DOI_IRI_BASE + str(record.citing)))
    triples.append(Triple(subject, CITO_HAS_CITED_ENTITY, DOI_IRI_BASE + str(record.cited)))
    if record.creation is not None:
        triples.append(
            Triple(
                subject,
                CITO_HAS_CREATION_DATE,
                Literal(str(record.creation), _DATE_DATATYPE[record.creation.precision]),
            )
        )
    timespan = record.timespan
    if timespan is not None:
        triples.append(Triple(subject, CITO_HAS_TIMESPAN, Literal(str(timespan), XSD + "duration")))
    return triples


def iter_ntriples_lines(index: CitationIndex) -> Iterator[str]:
    """Serialized lines in (subject, predicate, object) token order.

    Records stream in identifier order, which equals subject order because
    subjects embed the fixed-width-encoded identifier; each record's own
    handful of lines is sorted locally.
    """
    for record in index.records_in_oci_order():
        yield from sorted(render_triple(triple) for triple in citation_to_triples(record))


def serialize_ntriples(index: CitationIndex, sink: IO[str]) -> int:
    """Stream the whole index as N-Triples; returns the triple count.
    Raises IoFailure when the sink fails."""
    count = 0
    try:
        for line in iter_ntriples_lines(index):
            sink.write(line)
            sink.write("\n")
            count += 1
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return count
