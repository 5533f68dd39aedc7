"""DOI normalization and citation identifier (OCI) codec.

A citation identifier names one citation link. It is minted from the citing
and cited DOIs through a fixed-width codec: every permitted DOI character
maps to exactly two decimal digits, so the encoding is prefix-free,
injective, and invertible without any central lookup table.

Codec table (character -> two-digit code):

    '0'..'9' -> "00".."09"      '.' -> "36"      '(' -> "40"     '#' -> "46"
    'a'..'z' -> "10".."35"      '-' -> "37"      ')' -> "41"     '+' -> "47"
                                '_' -> "38"      ':' -> "42"
                                '/' -> "39"      ';' -> "43"
                                                 '<' -> "44"
                                                 '>' -> "45"

Any other character is unsupported and rejected at DOI construction time.
All functions here are pure; values are immutable and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidDoi, MalformedOci, UnknownCode, UnsupportedDoiCharacter

__all__ = [
    "Doi",
    "Oci",
    "SUPPLIER_PREFIX",
    "normalize_doi",
    "encode_oci",
    "decode_oci",
]

# Single-supplier index: every identifier part carries this prefix.
SUPPLIER_PREFIX = "020"

CHAR_TO_CODE: dict[str, str] = {}
for _i in range(10):
    CHAR_TO_CODE[chr(ord("0") + _i)] = f"0{_i}"
for _i in range(26):
    CHAR_TO_CODE[chr(ord("a") + _i)] = f"{10 + _i}"
CHAR_TO_CODE.update(
    {
        ".": "36",
        "-": "37",
        "_": "38",
        "/": "39",
        "(": "40",
        ")": "41",
        ":": "42",
        ";": "43",
        "<": "44",
        ">": "45",
        "#": "46",
        "+": "47",
    }
)

CODE_TO_CHAR = {code: char for char, code in CHAR_TO_CODE.items()}

# str.translate table: C-speed encoding for the hot path.
_ENCODE_TABLE = {ord(char): code for char, code in CHAR_TO_CODE.items()}

_PREFIX_STRIPS = ("https://doi.org/", "http://doi.org/", "doi:", "DOI:")


class Doi(str):
    """A normalized DOI: lowercase, starts with "10.", prefix and suffix
    separated by "/", every character drawn from the codec table.

    Subclasses str so instances cost no more memory than the value itself
    and sort, hash, and compare as plain strings.
    """

    __slots__ = ()

    def __new__(cls, value: str) -> "Doi":
        if type(value) is Doi:
            return value
        if not value.startswith("10."):
            raise InvalidDoi(f"DOI must start with '10.': {value!r}")
        prefix, sep, suffix = value[3:].partition("/")
        if not sep:
            raise InvalidDoi(f"DOI lacks the '/' separator: {value!r}")
        if not prefix:
            raise InvalidDoi(f"DOI prefix is empty: {value!r}")
        if not suffix:
            raise InvalidDoi(f"DOI suffix is empty: {value!r}")
        # translate maps every permitted character to digits and leaves
        # anything else alone, so one C-level pass validates the charset
        # (isascii guards non-ASCII code points that isdigit would accept)
        translated = value.translate(_ENCODE_TABLE)
        if not (translated.isascii() and translated.isdigit()):
            for ch in value:
                if ch not in CHAR_TO_CODE:
                    raise UnsupportedDoiCharacter(
                        f"character {ch!r} in {value!r} is outside the codec table"
                    )
        return super().__new__(cls, value)

    @property
    def prefix(self) -> str:
        return self.partition("/")[0]

    @property
    def suffix(self) -> str:
        return self.partition("/")[2]


def normalize_doi(raw: str) -> Doi:
    """Normalize an arbitrary DOI string: trim whitespace, strip one leading
    "https://doi.org/", "http://doi.org/", "doi:" or "DOI:" prefix, fold to
    lowercase, and validate.

    Raises InvalidDoi or UnsupportedDoiCharacter on anything that does not
    normalize to a valid DOI. Idempotent on success.
    """
    value = raw.strip()
    for strip in _PREFIX_STRIPS:
        if value.startswith(strip):
            value = value[len(strip):]
            break
    return Doi(value.strip().lower())


@dataclass(frozen=True, slots=True)
class Oci:
    """Persistent identifier of one citation: two digit strings, each the
    supplier prefix "020" followed by the 2-digits-per-character encoding of
    a DOI. Canonical rendering is "oci:" + citing_part + "-" + cited_part.
    """

    citing_part: str
    cited_part: str

    def __str__(self) -> str:
        return f"oci:{self.citing_part}-{self.cited_part}"

    @property
    def local_part(self) -> str:
        """Digits-and-dash form without the "oci:" scheme."""
        return f"{self.citing_part}-{self.cited_part}"

    def dois(self) -> tuple[Doi, Doi]:
        """Decode back into the (citing, cited) DOI pair."""
        return _decode_part(self.citing_part), _decode_part(self.cited_part)


def _encode_part(doi: Doi) -> str:
    return SUPPLIER_PREFIX + doi.translate(_ENCODE_TABLE)


def _decode_part(part: str) -> Doi:
    if not part.isascii() or not part.isdigit():
        raise MalformedOci(f"identifier part contains non-digits: {part!r}")
    if len(part) % 2 == 0 or len(part) < 5:
        raise MalformedOci(f"identifier part has invalid length {len(part)}: {part!r}")
    if not part.startswith(SUPPLIER_PREFIX):
        raise MalformedOci(f"unknown supplier prefix on part: {part!r}")
    payload = part[len(SUPPLIER_PREFIX):]
    chars: list[str] = []
    for i in range(0, len(payload), 2):
        code = payload[i : i + 2]
        try:
            chars.append(CODE_TO_CHAR[code])
        except KeyError:
            raise UnknownCode(f"code {code!r} at offset {i} is not in the codec table") from None
    decoded = "".join(chars)
    try:
        return Doi(decoded)
    except InvalidDoi as exc:
        raise MalformedOci(f"part decodes to {decoded!r}, which is not a DOI") from exc


def encode_oci(citing: Doi | str, cited: Doi | str) -> Oci:
    """Mint the citation identifier for a (citing, cited) DOI pair.

    Deterministic and injective: distinct pairs always yield distinct
    identifiers because every character encodes to a fixed-width code.
    Plain strings are validated as DOIs first (raising InvalidDoi or
    UnsupportedDoiCharacter), guarding callers that skip normalization.
    """
    return Oci(_encode_part(Doi(citing)), _encode_part(Doi(cited)))


def decode_oci(oci: str | Oci) -> tuple[Doi, Doi]:
    """Invert encode_oci: recover the (citing, cited) DOI pair.

    Raises MalformedOci on a missing "oci:" scheme, missing "-" separator,
    non-digit characters, even or too-short part length, an unknown supplier
    prefix, or a payload that does not decode to a DOI; UnknownCode when a
    two-digit code has no codec entry.
    """
    if isinstance(oci, Oci):
        return oci.dois()
    if not oci.startswith("oci:"):
        raise MalformedOci(f"missing 'oci:' scheme: {oci!r}")
    body = oci[4:]
    citing_part, sep, cited_part = body.partition("-")
    if not sep:
        raise MalformedOci(f"missing '-' separator: {oci!r}")
    if "-" in cited_part:
        raise MalformedOci(f"more than one '-' separator: {oci!r}")
    return _decode_part(citing_part), _decode_part(cited_part)
