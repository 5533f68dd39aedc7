"""ocix: an open DOI-to-DOI citation index engine.

Citations are first-class records: each carries a persistent identifier
minted from its citing and cited DOIs, a creation date, a signed timespan,
self-citation classes, and a provenance chain. Everything is exported as
CSV and N-Triples under CC0 and queryable through a CLI and a read-only
HTTP API.
"""

from __future__ import annotations

from .dates import PartialDate, Precision, TimeSpan, compute_timespan, parse_partial_date, parse_timespan
from .errors import (
    AlreadyExists,
    BindFailure,
    DuplicateResourceDoi,
    EmptyReferenceSet,
    InvalidDate,
    InvalidDoi,
    IoFailure,
    MalformedOci,
    MalformedRecord,
    NonMonotonicTimestamp,
    OcixError,
    UnknownCode,
    UnknownDoi,
    UnknownEntity,
    UnknownOci,
    UnsupportedDoiCharacter,
)
from .identifiers import Doi, Oci, decode_oci, encode_oci, normalize_doi

__version__ = "0.1.0"

LICENSE_ID = "CC0-1.0"

__all__ = [
    "__version__",
    "LICENSE_ID",
    "Doi",
    "Oci",
    "normalize_doi",
    "encode_oci",
    "decode_oci",
    "PartialDate",
    "TimeSpan",
    "Precision",
    "parse_partial_date",
    "parse_timespan",
    "compute_timespan",
    "OcixError",
    "InvalidDoi",
    "UnsupportedDoiCharacter",
    "MalformedOci",
    "UnknownCode",
    "InvalidDate",
    "MalformedRecord",
    "IoFailure",
    "DuplicateResourceDoi",
    "UnknownOci",
    "UnknownDoi",
    "AlreadyExists",
    "UnknownEntity",
    "NonMonotonicTimestamp",
    "EmptyReferenceSet",
    "BindFailure",
]
