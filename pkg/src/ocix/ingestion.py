"""Streaming ingestion of bibliographic dump files.

Input is JSON Lines, one record per line, UTF-8:

    {"doi": "10.1/a",            required
     "title": "...",
     "date": "2020-03",          partial-date grammar
     "orcids": ["0000-0001-..."],
     "authors": ["A. Person"],
     "issns": ["1234-5678"],
     "rors": ["https://ror.org/05gq02987"],
     "references": ["10.2/b", ...]}

Unknown fields are ignored. Ingestion never aborts on a bad line: malformed
lines, invalid DOIs, duplicate and self references are counted in the
report (with the first 100 offending line numbers per category) and
processing continues. Only a failure of the underlying source is fatal.
Memory stays bounded by the retained resources, not by the input.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

from .dates import PartialDate, parse_partial_date
from .errors import InvalidDate, InvalidDoi, IoFailure, MalformedRecord
from .identifiers import Doi, normalize_doi

__all__ = [
    "BibResource",
    "ParsedRecord",
    "IngestReport",
    "parse_record",
    "ingest_stream",
    "resource_to_dict",
]

SAMPLE_LIMIT = 100

_ORCID_RE = re.compile(r"^\d{4}-\d{4}-\d{4}-\d{3}[\dX]$")
_ISSN_RE = re.compile(r"^\d{4}-\d{3}[\dX]$")

_EMPTY: frozenset[str] = frozenset()


@dataclass(frozen=True, slots=True)
class BibResource:
    """One bibliographic record, normalized.

    References are deduplicated, self-reference-free, and stored sorted so
    that merge results do not depend on input order. Author names are
    display strings only; identity matching uses ORCIDs exclusively.
    """

    doi: Doi
    title: str | None = None
    pub_date: PartialDate | None = None
    author_orcids: frozenset[str] = _EMPTY
    author_names: tuple[str, ...] = ()
    issns: frozenset[str] = _EMPTY
    ror_ids: frozenset[str] = _EMPTY
    references: tuple[Doi, ...] = ()


@dataclass(frozen=True, slots=True)
class ParsedRecord:
    """A parsed resource plus what was dropped to make it valid."""

    resource: BibResource
    duplicate_references_dropped: int = 0
    self_references_dropped: int = 0
    invalid_references_dropped: int = 0


@dataclass(slots=True)
class IngestReport:
    """Counters and first-offender samples for one ingestion run.

    Every non-blank line lands in exactly one of: resources_accepted,
    malformed_lines, or records_merged. Lines whose own DOI is invalid
    count as malformed and additionally under invalid_dois; dropped
    reference DOIs count under invalid_dois only.
    """

    lines_read: int = 0
    resources_accepted: int = 0
    malformed_lines: int = 0
    invalid_dois: int = 0
    duplicate_references_dropped: int = 0
    self_references_dropped: int = 0
    records_merged: int = 0
    blank_lines: int = 0
    samples: dict[str, list[int]] = field(default_factory=dict)

    def sample(self, category: str, line_number: int) -> None:
        bucket = self.samples.setdefault(category, [])
        if len(bucket) < SAMPLE_LIMIT:
            bucket.append(line_number)

    def to_dict(self) -> dict:
        return {
            "lines_read": self.lines_read,
            "resources_accepted": self.resources_accepted,
            "malformed_lines": self.malformed_lines,
            "invalid_dois": self.invalid_dois,
            "duplicate_references_dropped": self.duplicate_references_dropped,
            "self_references_dropped": self.self_references_dropped,
            "records_merged": self.records_merged,
            "blank_lines": self.blank_lines,
            "samples": self.samples,
        }


def _intern(interner: dict, value):
    return interner.setdefault(value, value)


def _string_list(obj: dict, key: str) -> list[str]:
    value = obj.get(key)
    if value is None:
        return []
    if not isinstance(value, list) or any(not isinstance(item, str) for item in value):
        raise MalformedRecord(f"field {key!r} must be an array of strings")
    return value


def parse_record(line: str, interner: dict[str, str] | None = None) -> ParsedRecord:
    """Parse one dump line into a BibResource.

    Raises MalformedRecord when the line is not a JSON object matching the
    schema (including an unparseable date), and InvalidDoi when the
    record's own DOI does not normalize. Invalid reference DOIs, duplicate
    references, and self references are dropped and counted, not fatal.
    ORCID and ISSN values with the wrong shape are dropped silently.

    `interner` deduplicates identifier strings across records: references
    and shared ORCIDs/ISSNs/RORs point at one object each instead of one
    copy per record, which is what keeps multi-million-line ingests inside
    commodity memory.
    """
    try:
        obj = json.loads(line)
    except ValueError as exc:
        raise MalformedRecord(f"not JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise MalformedRecord("record is not a JSON object")
    if interner is None:
        interner = {}

    doi_raw = obj.get("doi")
    if not isinstance(doi_raw, str):
        raise MalformedRecord("missing or non-string 'doi'")
    doi = _intern(interner, normalize_doi(doi_raw))

    title = obj.get("title")
    if title is not None and not isinstance(title, str):
        raise MalformedRecord("field 'title' must be a string")

    pub_date: PartialDate | None = None
    date_raw = obj.get("date")
    if date_raw is not None:
        if not isinstance(date_raw, str):
            raise MalformedRecord("field 'date' must be a string")
        try:
            pub_date = parse_partial_date(date_raw)
        except InvalidDate as exc:
            raise MalformedRecord(f"field 'date': {exc}") from exc

    orcids = frozenset(
        _intern(interner, v) for v in _string_list(obj, "orcids") if _ORCID_RE.match(v)
    )
    issns = frozenset(
        _intern(interner, v) for v in _string_list(obj, "issns") if _ISSN_RE.match(v)
    )
    rors = frozenset(_intern(interner, v) for v in _string_list(obj, "rors") if v)
    authors = tuple(obj_name for obj_name in _string_list(obj, "authors") if obj_name)

    seen: set[Doi] = set()
    duplicates = 0
    self_refs = 0
    invalid_refs = 0
    for raw_ref in _string_list(obj, "references"):
        try:
            ref = _intern(interner, normalize_doi(raw_ref))
        except InvalidDoi:
            invalid_refs += 1
            continue
        if ref == doi:
            self_refs += 1
            continue
        if ref in seen:
            duplicates += 1
            continue
        seen.add(ref)

    resource = BibResource(
        doi=doi,
        title=title or None,
        pub_date=pub_date,
        author_orcids=orcids,
        author_names=authors,
        issns=issns,
        ror_ids=rors,
        references=tuple(sorted(seen)),
    )
    return ParsedRecord(resource, duplicates, self_refs, invalid_refs)


def _merge(old: BibResource, new: BibResource) -> BibResource:
    """Fold a later record into an earlier one for the same DOI: union for
    set-valued fields and references, last non-empty wins for scalars."""
    return replace(
        old,
        title=new.title or old.title,
        pub_date=new.pub_date or old.pub_date,
        author_orcids=old.author_orcids | new.author_orcids,
        author_names=new.author_names or old.author_names,
        issns=old.issns | new.issns,
        ror_ids=old.ror_ids | new.ror_ids,
        references=tuple(sorted(set(old.references) | set(new.references))),
    )


def ingest_stream(source: Iterable[str]) -> tuple[list[BibResource], IngestReport]:
    """Consume lines in order, returning accepted resources (first-seen
    order) and the ingestion report.

    A DOI appearing in several records is merged with _merge semantics.
    Blank lines are skipped and counted. The only fatal error is IoFailure,
    raised when the source itself fails to yield.
    """
    resources: dict[Doi, BibResource] = {}
    report = IngestReport()
    interner: dict[str, str] = {}
    iterator: Iterator[str] = iter(source)

    while True:
        try:
            line = next(iterator)
        except StopIteration:
            break
        except (OSError, UnicodeDecodeError) as exc:
            raise IoFailure(str(exc)) from exc
        report.lines_read += 1
        number = report.lines_read
        if not line.strip():
            report.blank_lines += 1
            report.sample("blank", number)
            continue
        try:
            parsed = parse_record(line)
        except MalformedRecord:
            report.malformed_lines += 1
            report.sample("malformed", number)
            continue
        except InvalidDoi:
            report.malformed_lines += 1
            report.invalid_dois += 1
            report.sample("invalid_doi", number)
            continue

        report.duplicate_references_dropped += parsed.duplicate_references_dropped
        report.self_references_dropped += parsed.self_references_dropped
        report.invalid_dois += parsed.invalid_references_dropped
        if parsed.invalid_references_dropped:
            report.sample("invalid_doi", number)
        if parsed.duplicate_references_dropped:
            report.sample("duplicate_reference", number)
        if parsed.self_references_dropped:
            report.sample("self_reference", number)

        resource = parsed.resource
        existing = resources.get(resource.doi)
        if existing is None:
            resources[resource.doi] = resource
            report.resources_accepted += 1
        else:
            resources[resource.doi] = _merge(existing, resource)
            report.records_merged += 1
            report.sample("merged", number)

    return list(resources.values()), report


def resource_to_dict(resource: BibResource) -> dict:
    """Render a resource back into the dump schema (sorted, normalized);
    the resource store written this way is itself a valid dump."""
    record: dict = {"doi": str(resource.doi)}
    if resource.title:
        record["title"] = resource.title
    if resource.pub_date is not None:
        record["date"] = str(resource.pub_date)
    if resource.author_orcids:
        record["orcids"] = sorted(resource.author_orcids)
    if resource.author_names:
        record["authors"] = list(resource.author_names)
    if resource.issns:
        record["issns"] = sorted(resource.issns)
    if resource.ror_ids:
        record["rors"] = sorted(resource.ror_ids)
    if resource.references:
        record["references"] = [str(ref) for ref in resource.references]
    return record
