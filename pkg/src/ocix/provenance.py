"""Append-only provenance ledger.

Every entity (a DOI or a citation identifier) gets a numbered chain of
snapshots recording where its data came from, who touched it, and when.
Snapshot 1 is always the creation; each later snapshot invalidates its
predecessor by stamping the predecessor's invalidated_at with its own
generated_at, so exactly the last snapshot of a chain is open.

Timestamps are UTC at second resolution, rendered RFC 3339 with a "Z"
suffix. Ties are allowed: batch jobs stamp many entities with one clock
read. The ledger is single-writer, multi-reader.
"""

from __future__ import annotations

import datetime
import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from .errors import AlreadyExists, IoFailure, NonMonotonicTimestamp, UnknownEntity

__all__ = [
    "ChangeType",
    "ProvenanceSnapshot",
    "ProvenanceLedger",
    "PROVENANCE_FILENAME",
]

PROVENANCE_FILENAME = "provenance.jsonl"


class ChangeType(enum.Enum):
    CREATION = "creation"
    MODIFICATION = "modification"
    MERGE = "merge"


def _to_utc_second(at: datetime.datetime) -> datetime.datetime:
    if at.tzinfo is None:
        at = at.replace(tzinfo=datetime.timezone.utc)
    return at.astimezone(datetime.timezone.utc).replace(microsecond=0)


def _render(at: datetime.datetime) -> str:
    return at.strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse(text: str) -> datetime.datetime:
    return datetime.datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(
        tzinfo=datetime.timezone.utc
    )


@dataclass(slots=True)
class ProvenanceSnapshot:
    """One numbered state of an entity. Mutable only in that the ledger
    sets invalidated_at when the next snapshot supersedes it."""

    entity_id: str
    snapshot_number: int
    generated_at: datetime.datetime
    invalidated_at: datetime.datetime | None
    agent: str
    source: str
    change_type: ChangeType
    description: str

    def to_dict(self) -> dict:
        return {
            "entity_id": self.entity_id,
            "snapshot_number": self.snapshot_number,
            "generated_at": _render(self.generated_at),
            "invalidated_at": _render(self.invalidated_at) if self.invalidated_at else None,
            "agent": self.agent,
            "source": self.source,
            "change_type": self.change_type.value,
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ProvenanceSnapshot":
        return cls(
            entity_id=payload["entity_id"],
            snapshot_number=payload["snapshot_number"],
            generated_at=_parse(payload["generated_at"]),
            invalidated_at=_parse(payload["invalidated_at"]) if payload.get("invalidated_at") else None,
            agent=payload["agent"],
            source=payload["source"],
            change_type=ChangeType(payload["change_type"]),
            description=payload["description"],
        )


class ProvenanceLedger:
    """In-memory ledger with a JSON Lines sidecar representation."""

    __slots__ = ("_chains",)

    def __init__(self) -> None:
        self._chains: dict[str, list[ProvenanceSnapshot]] = {}

    def __contains__(self, entity_id: str) -> bool:
        return entity_id in self._chains

    def __len__(self) -> int:
        return len(self._chains)

    def entity_ids(self) -> Iterable[str]:
        return self._chains.keys()

    def record_creation(
        self,
        entity_id: str,
        source: str,
        agent: str,
        at: datetime.datetime,
        description: str = "",
    ) -> ProvenanceSnapshot:
        """Open an entity's chain with snapshot 1. Raises AlreadyExists if
        the entity already has snapshots."""
        if entity_id in self._chains:
            raise AlreadyExists(entity_id)
        snapshot = ProvenanceSnapshot(
            entity_id=entity_id,
            snapshot_number=1,
            generated_at=_to_utc_second(at),
            invalidated_at=None,
            agent=agent,
            source=source,
            change_type=ChangeType.CREATION,
            description=description or f"created from {source}",
        )
        self._chains[entity_id] = [snapshot]
        return snapshot

    def record_modification(
        self,
        entity_id: str,
        description: str,
        agent: str,
        at: datetime.datetime,
        source: str | None = None,
        change_type: ChangeType = ChangeType.MODIFICATION,
    ) -> ProvenanceSnapshot:
        """Append a snapshot, invalidating the previous one at `at`.

        The source defaults to the superseded snapshot's source (the data
        origin persists unless the modification states a new one). Raises
        UnknownEntity for an entity without a chain and
        NonMonotonicTimestamp when `at` precedes the latest snapshot.
        """
        chain = self._chains.get(entity_id)
        if not chain:
            raise UnknownEntity(entity_id)
        at = _to_utc_second(at)
        last = chain[-1]
        if at < last.generated_at:
            raise NonMonotonicTimestamp(
                f"{entity_id}: {_render(at)} precedes {_render(last.generated_at)}"
            )
        last.invalidated_at = at
        snapshot = ProvenanceSnapshot(
            entity_id=entity_id,
            snapshot_number=last.snapshot_number + 1,
            generated_at=at,
            invalidated_at=None,
            agent=agent,
            source=source if source is not None else last.source,
            change_type=change_type,
            description=description,
        )
        chain.append(snapshot)
        return snapshot

    def provenance_chain(self, entity_id: str) -> list[ProvenanceSnapshot]:
        """Complete chain ordered by snapshot number; [] for unknown."""
        return list(self._chains.get(entity_id, ()))

    def write(self, sink: IO[str]) -> int:
        """Serialize as JSON Lines, one snapshot per line, sorted by
        (entity_id, snapshot_number) for deterministic output."""
        count = 0
        for entity_id in sorted(self._chains):
            for snapshot in self._chains[entity_id]:
                sink.write(json.dumps(snapshot.to_dict(), separators=(",", ":")))
                sink.write("\n")
                count += 1
        return count

    def save(self, path: Path) -> int:
        try:
            with open(path, "w", encoding="utf-8") as handle:
                return self.write(handle)
        except OSError as exc:
            raise IoFailure(str(exc)) from exc

    @classmethod
    def load(cls, path: Path) -> "ProvenanceLedger":
        """Rebuild a ledger from its sidecar, validating chain invariants."""
        ledger = cls()
        try:
            with open(path, "r", encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    snapshot = ProvenanceSnapshot.from_dict(json.loads(line))
                    ledger._chains.setdefault(snapshot.entity_id, []).append(snapshot)
        except OSError as exc:
            raise IoFailure(str(exc)) from exc
        for entity_id, chain in ledger._chains.items():
            chain.sort(key=lambda snapshot: snapshot.snapshot_number)
            _validate_chain(entity_id, chain)
        return ledger


def _validate_chain(entity_id: str, chain: list[ProvenanceSnapshot]) -> None:
    if chain[0].snapshot_number != 1 or chain[0].change_type is not ChangeType.CREATION:
        raise IoFailure(f"{entity_id}: chain does not start with a creation snapshot")
    for position, snapshot in enumerate(chain):
        if snapshot.snapshot_number != position + 1:
            raise IoFailure(f"{entity_id}: snapshot numbers are not consecutive")
    for previous, current in zip(chain, chain[1:]):
        if previous.invalidated_at != current.generated_at:
            raise IoFailure(f"{entity_id}: broken invalidated/generated linkage")
    if chain[-1].invalidated_at is not None:
        raise IoFailure(f"{entity_id}: last snapshot must be open")
