"""The citation index: deduplicated DOI-to-DOI links as first-class records.

Each record carries its persistent identifier, the citing side's
publication date (creation), the signed timespan between the two dates,
and the self-citation classes shared by the endpoints. Citations whose
cited DOI has no metadata record in the corpus are kept and flagged
dangling. A built index is immutable and safe for unlimited concurrent
reads.
"""

from __future__ import annotations

import csv
import enum
from bisect import bisect_left
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .dates import PartialDate, TimeSpan, compute_timespan
from .errors import DuplicateResourceDoi, UnknownOci
from .identifiers import Doi, Oci, _encode_part, decode_oci, encode_oci
from .ingestion import BibResource

__all__ = [
    "SelfCitationType",
    "CitationRecord",
    "CitationIndex",
    "BuildReport",
    "classify_self_citation",
    "build_index",
    "write_citations_csv",
    "CSV_HEADER",
]

CSV_HEADER = ("oci", "citing", "cited", "creation", "timespan",
              "author_sc", "journal_sc", "institutional_sc")


class SelfCitationType(enum.Enum):
    AUTHOR = "author"
    JOURNAL = "journal"
    INSTITUTIONAL = "institutional"

    @property
    def label(self) -> str:
        return self.value


_NO_SELF_CITATION: frozenset[SelfCitationType] = frozenset()

# The 8 possible class sets, interned: records share instead of allocating.
_SC_CACHE: dict[tuple[bool, bool, bool], frozenset[SelfCitationType]] = {}
for _a in (False, True):
    for _j in (False, True):
        for _i in (False, True):
            members = set()
            if _a:
                members.add(SelfCitationType.AUTHOR)
            if _j:
                members.add(SelfCitationType.JOURNAL)
            if _i:
                members.add(SelfCitationType.INSTITUTIONAL)
            _SC_CACHE[(_a, _j, _i)] = frozenset(members)


def classify_self_citation(
    citing: BibResource, cited: BibResource
) -> frozenset[SelfCitationType]:
    """Self-citation classes shared by two resources: author when ORCID
    sets intersect, journal when ISSN sets intersect, institutional when
    ROR sets intersect."""
    return _SC_CACHE[
        (
            not citing.author_orcids.isdisjoint(cited.author_orcids),
            not citing.issns.isdisjoint(cited.issns),
            not citing.ror_ids.isdisjoint(cited.ror_ids),
        )
    ]


class CitationRecord:
    """One citation link, keyed by (citing, cited).

    Slotted and minimal: the identifier and timespan are derived on access
    from the stored endpoints, which keeps multi-million-link indexes
    within commodity memory.
    """

    __slots__ = ("citing", "cited", "creation", "cited_date", "self_citation", "dangling_cited")

    def __init__(
        self,
        citing: Doi,
        cited: Doi,
        creation: PartialDate | None,
        cited_date: PartialDate | None,
        self_citation: frozenset[SelfCitationType],
        dangling_cited: bool,
    ) -> None:
        self.citing = citing
        self.cited = cited
        self.creation = creation
        self.cited_date = cited_date
        self.self_citation = self_citation
        self.dangling_cited = dangling_cited

    @property
    def oci(self) -> Oci:
        return encode_oci(self.citing, self.cited)

    @property
    def timespan(self) -> TimeSpan | None:
        if self.creation is None or self.cited_date is None:
            return None
        return compute_timespan(self.creation, self.cited_date)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CitationRecord):
            return NotImplemented
        return (
            self.citing == other.citing
            and self.cited == other.cited
            and self.creation == other.creation
            and self.cited_date == other.cited_date
            and self.self_citation == other.self_citation
            and self.dangling_cited == other.dangling_cited
        )

    def __hash__(self) -> int:
        return hash((self.citing, self.cited))

    def __repr__(self) -> str:
        return f"CitationRecord({self.citing!r} -> {self.cited!r})"

    def to_dict(self) -> dict:
        timespan = self.timespan
        return {
            "oci": str(self.oci),
            "citing": str(self.citing),
            "cited": str(self.cited),
            "creation": str(self.creation) if self.creation is not None else None,
            "timespan": str(timespan) if timespan is not None else None,
            "self_citation": sorted(sc.label for sc in self.self_citation),
            "dangling_cited": self.dangling_cited,
        }


@dataclass(slots=True)
class BuildReport:
    resources_indexed: int = 0
    citations: int = 0
    dangling_citations: int = 0
    duplicate_pairs_dropped: int = 0

    def to_dict(self) -> dict:
        return {
            "resources_indexed": self.resources_indexed,
            "citations": self.citations,
            "dangling_citations": self.dangling_citations,
            "duplicate_pairs_dropped": self.duplicate_pairs_dropped,
        }


class CitationIndex:
    """Immutable citation store with per-DOI adjacency.

    Outgoing lists are sorted by cited DOI, incoming lists by citing DOI.
    Use build_index to construct; do not mutate afterwards.
    """

    __slots__ = ("resources", "build_report", "_outgoing", "_incoming", "_total")

    def __init__(
        self,
        resources: dict[Doi, BibResource],
        outgoing: dict[Doi, list[CitationRecord]],
        incoming: dict[Doi, list[CitationRecord]],
        build_report: BuildReport,
    ) -> None:
        self.resources = resources
        self._outgoing = outgoing
        self._incoming = incoming
        self._total = build_report.citations
        self.build_report = build_report

    @property
    def total_citations(self) -> int:
        return self._total

    def iter_citations(self) -> Iterator[CitationRecord]:
        """All records, grouped by citing resource in insertion order."""
        for records in self._outgoing.values():
            yield from records

    def citing_dois(self) -> Iterable[Doi]:
        return self._outgoing.keys()

    def cited_dois(self) -> Iterable[Doi]:
        return self._incoming.keys()

    def lookup_citations(self, doi: Doi | str) -> list[CitationRecord]:
        """Incoming citations of `doi`, sorted by citing DOI; empty when
        unknown."""
        return list(self._incoming.get(doi, ()))

    def lookup_references(self, doi: Doi | str) -> list[CitationRecord]:
        """Outgoing citations of `doi`, sorted by cited DOI; empty when
        unknown."""
        return list(self._outgoing.get(doi, ()))

    def citation_count(self, doi: Doi | str) -> int:
        return len(self._incoming.get(doi, ()))

    def get_citation(self, citing: Doi | str, cited: Doi | str) -> CitationRecord | None:
        records = self._outgoing.get(citing)
        if not records:
            return None
        position = bisect_left(records, cited, key=lambda record: record.cited)
        if position < len(records) and records[position].cited == cited:
            return records[position]
        return None

    def lookup_by_oci(self, oci: str | Oci) -> CitationRecord:
        """Resolve a citation identifier; raises MalformedOci on a bad
        string and UnknownOci when no such citation is indexed."""
        citing, cited = decode_oci(oci)
        record = self.get_citation(citing, cited)
        if record is None:
            raise UnknownOci(f"no citation for {oci}")
        return record

    def records_in_oci_order(self) -> Iterator[CitationRecord]:
        """Stream all records sorted by their identifier string.

        The codec is fixed-width, so ordering groups by the encoded citing
        part and each group by the encoded cited part matches a global sort
        of the rendered identifiers without materializing them.
        """
        groups = sorted(self._outgoing.items(), key=lambda item: _encode_part(item[0]))
        for _, records in groups:
            yield from sorted(records, key=lambda record: _encode_part(record.cited))


def build_index(resources: Iterable[BibResource]) -> CitationIndex:
    """Build the deduplicated citation index from post-ingestion resources.

    One record per distinct (citing, cited) pair: creation is the citing
    resource's date, the timespan exists when both endpoint dates do, and
    self-citation classes are computed when the cited metadata exists.
    References to DOIs absent from the corpus become dangling records.
    Raises DuplicateResourceDoi when two resources share a DOI. Building is
    deterministic: the same resource set always yields identical exports.
    """
    resource_map: dict[Doi, BibResource] = {}
    for resource in resources:
        if resource.doi in resource_map:
            raise DuplicateResourceDoi(str(resource.doi))
        resource_map[resource.doi] = resource

    outgoing: dict[Doi, list[CitationRecord]] = {}
    incoming: dict[Doi, list[CitationRecord]] = {}
    report = BuildReport(resources_indexed=len(resource_map))

    for citing_doi, citing_resource in resource_map.items():
        records: list[CitationRecord] = []
        seen: set[Doi] = set()
        for cited_doi in citing_resource.references:
            if cited_doi == citing_doi or cited_doi in seen:
                report.duplicate_pairs_dropped += 1
                continue
            seen.add(cited_doi)
            cited_resource = resource_map.get(cited_doi)
            if cited_resource is None:
                record = CitationRecord(
                    citing_doi, cited_doi, citing_resource.pub_date,
                    None, _NO_SELF_CITATION, True,
                )
                report.dangling_citations += 1
            else:
                record = CitationRecord(
                    citing_doi, cited_doi, citing_resource.pub_date,
                    cited_resource.pub_date,
                    classify_self_citation(citing_resource, cited_resource),
                    False,
                )
            records.append(record)
        if records:
            records.sort(key=lambda record: record.cited)
            outgoing[citing_doi] = records
            report.citations += len(records)
            for record in records:
                incoming.setdefault(record.cited, []).append(record)

    for records in incoming.values():
        records.sort(key=lambda record: record.citing)

    return CitationIndex(resource_map, outgoing, incoming, report)


def _csv_row(record: CitationRecord) -> tuple[str, ...]:
    timespan = record.timespan
    classes = record.self_citation
    return (
        str(record.oci),
        str(record.citing),
        str(record.cited),
        str(record.creation) if record.creation is not None else "",
        str(timespan) if timespan is not None else "",
        "yes" if SelfCitationType.AUTHOR in classes else "no",
        "yes" if SelfCitationType.JOURNAL in classes else "no",
        "yes" if SelfCitationType.INSTITUTIONAL in classes else "no",
    )


def write_citations_csv(index: CitationIndex, sink: IO[str], license_comment: str | None = None) -> int:
    """Write the index as CSV, one row per citation, sorted by identifier,
    RFC-4180 quoting. Returns the number of rows written. When
    `license_comment` is given it is emitted as a '#' comment line above
    the header (exports are license-stamped; the plain store file is not).
    """
    if license_comment is not None:
        sink.write(f"# license: {license_comment}\n")
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    count = 0
    for record in index.records_in_oci_order():
        writer.writerow(_csv_row(record))
        count += 1
    return count
