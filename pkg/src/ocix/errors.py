"""Exception hierarchy.

Every error raised by this package derives from :class:`OcixError`, and the
class name is the stable, structured error name surfaced on the CLI's stderr
and in HTTP error bodies.
"""

from __future__ import annotations


class OcixError(Exception):
    """Base class for all errors raised by ocix."""

    @property
    def name(self) -> str:
        return type(self).__name__


class InvalidDoi(OcixError):
    """String is not a DOI: wrong prefix, missing separator, or empty parts."""


class UnsupportedDoiCharacter(InvalidDoi):
    """DOI contains a character outside the identifier codec table."""


class MalformedOci(OcixError):
    """String is not a citation identifier: bad scheme, separator, digits,
    part length, supplier prefix, or undecodable payload."""


class UnknownCode(OcixError):
    """Two-digit code with no entry in the identifier codec table."""


class InvalidDate(OcixError):
    """Partial date has the wrong shape, an out-of-range component, or names
    a nonexistent calendar day."""


class MalformedRecord(OcixError):
    """Input line is not parseable as a bibliographic record."""


class IoFailure(OcixError):
    """Underlying read or write failure; the only fatal ingestion error."""


class DuplicateResourceDoi(OcixError):
    """Two resources passed to the index builder share a DOI."""


class UnknownOci(OcixError):
    """Well-formed citation identifier with no record in the index."""


class UnknownDoi(OcixError):
    """DOI with no metadata record in the index."""


class AlreadyExists(OcixError):
    """Provenance creation attempted for an entity that already has a chain."""


class UnknownEntity(OcixError):
    """Provenance modification attempted for an entity with no chain."""


class NonMonotonicTimestamp(OcixError):
    """Provenance event timestamp precedes the chain's latest snapshot."""


class EmptyReferenceSet(OcixError):
    """Coverage requested against an empty reference set."""


class BindFailure(OcixError):
    """HTTP service could not bind its port."""
