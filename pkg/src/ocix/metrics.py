"""Corpus statistics and coverage against external citation sets.

Coverage compares (citing, cited) DOI pairs, the unit the index stores,
and is carried as an exact integer ratio internally; only presentation
rounds, half-up, to one decimal. That keeps equality assertions on
percentages safe from float drift.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import IO, Iterable

from .errors import EmptyReferenceSet, MalformedRecord
from .identifiers import Doi, normalize_doi
from .index import CitationIndex, SelfCitationType

__all__ = ["CorpusStats", "corpus_stats", "coverage", "read_reference_set"]

REFERENCE_SET_HEADER = ("citing", "cited")


@dataclass(frozen=True, slots=True)
class CorpusStats:
    citation_links: int
    bibliographic_resources: int
    dangling_citations: int
    self_citation_counts: dict[str, int]
    timespan_coverage: float

    def to_dict(self) -> dict:
        return {
            "citation_links": self.citation_links,
            "bibliographic_resources": self.bibliographic_resources,
            "dangling_citations": self.dangling_citations,
            "self_citation_counts": dict(self.self_citation_counts),
            "timespan_coverage": self.timespan_coverage,
        }


def corpus_stats(index: CitationIndex) -> CorpusStats:
    """Exact corpus counts.

    bibliographic_resources counts distinct DOIs participating in at least
    one citation (citing or cited side, dangling included); isolated
    resources with no links do not count.
    """
    links = 0
    dangling = 0
    with_timespan = 0
    class_counts = {sc.label: 0 for sc in SelfCitationType}
    for record in index.iter_citations():
        links += 1
        if record.dangling_cited:
            dangling += 1
        if record.creation is not None and record.cited_date is not None:
            with_timespan += 1
        for self_citation in record.self_citation:
            class_counts[self_citation.label] += 1
    participants = set(index.citing_dois()) | set(index.cited_dois())
    return CorpusStats(
        citation_links=links,
        bibliographic_resources=len(participants),
        dangling_citations=dangling,
        self_citation_counts=class_counts,
        timespan_coverage=(with_timespan / links) if links else 0.0,
    )


def _round_percentage(present: int, total: int) -> float:
    value = Decimal(present) * 100 / Decimal(total)
    return float(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def coverage(index: CitationIndex, reference_set: Iterable[tuple[Doi, Doi]]) -> float:
    """Percentage of reference-set pairs present in the index, to one
    decimal, rounded half-up. Raises EmptyReferenceSet on an empty set.
    Adding citations to the index can only increase this number.
    """
    pairs = set(reference_set)
    if not pairs:
        raise EmptyReferenceSet("reference set has no pairs")
    present = sum(
        1 for citing, cited in pairs if index.get_citation(citing, cited) is not None
    )
    return _round_percentage(present, len(pairs))


def read_reference_set(source: IO[str]) -> set[tuple[Doi, Doi]]:
    """Load a reference set from CSV with header "citing,cited"; DOIs are
    normalized on load. Raises MalformedRecord on a wrong header or row
    shape and propagates DOI validation errors."""
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRecord("reference set is empty, expected a citing,cited header") from None
    if tuple(header) != REFERENCE_SET_HEADER:
        raise MalformedRecord(f"expected header citing,cited, got {header!r}")
    pairs: set[tuple[Doi, Doi]] = set()
    for row in reader:
        if not row:
            continue
        if len(row) != 2:
            raise MalformedRecord(f"reference set row has {len(row)} fields: {row!r}")
        pairs.add((normalize_doi(row[0]), normalize_doi(row[1])))
    return pairs
