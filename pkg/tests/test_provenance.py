from __future__ import annotations

import datetime

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ocix.errors import AlreadyExists, IoFailure, NonMonotonicTimestamp, UnknownEntity
from ocix.provenance import ChangeType, ProvenanceLedger


def ts(seconds: int) -> datetime.datetime:
    return datetime.datetime(2022, 3, 1, 12, 0, 0, tzinfo=datetime.timezone.utc) + \
        datetime.timedelta(seconds=seconds)


class TestRecordCreation:
    def test_first_snapshot(self):
        ledger = ProvenanceLedger()
        snapshot = ledger.record_creation("10.1/a", "file:dump-2022-03.jsonl", "tester", ts(0))
        assert snapshot.snapshot_number == 1
        assert snapshot.change_type is ChangeType.CREATION
        assert snapshot.invalidated_at is None
        assert snapshot.source == "file:dump-2022-03.jsonl"

    def test_duplicate_creation_rejected(self):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
        with pytest.raises(AlreadyExists):
            ledger.record_creation("10.1/a", "file:x", "tester", ts(1))


class TestRecordModification:
    def test_chain_rule(self):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
        ledger.record_modification("10.1/a", "title corrected", "curator", ts(10))
        first, second = ledger.provenance_chain("10.1/a")
        assert second.snapshot_number == 2
        assert first.invalidated_at == second.generated_at
        assert second.invalidated_at is None
        assert second.source == "file:x"  # inherited

    def test_unknown_entity(self):
        with pytest.raises(UnknownEntity):
            ProvenanceLedger().record_modification("10.1/a", "x", "tester", ts(0))

    def test_non_monotonic_timestamp(self):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/a", "file:x", "tester", ts(10))
        with pytest.raises(NonMonotonicTimestamp):
            ledger.record_modification("10.1/a", "x", "tester", ts(5))

    def test_equal_timestamps_allowed(self):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
        snapshot = ledger.record_modification("10.1/a", "batch", "tester", ts(0))
        assert snapshot.generated_at == snapshot.generated_at.replace(microsecond=0)

    def test_merge_change_type(self):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
        snapshot = ledger.record_modification(
            "10.1/a", "merged duplicate record", "tester", ts(1),
            source="file:y", change_type=ChangeType.MERGE,
        )
        assert snapshot.change_type is ChangeType.MERGE
        assert snapshot.source == "file:y"


class TestProvenanceChain:
    def test_full_chain(self):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
        ledger.record_modification("10.1/a", "one", "tester", ts(1))
        ledger.record_modification("10.1/a", "two", "tester", ts(2))
        chain = ledger.provenance_chain("10.1/a")
        assert [snapshot.snapshot_number for snapshot in chain] == [1, 2, 3]
        assert all(a.generated_at <= b.generated_at for a, b in zip(chain, chain[1:]))

    def test_unknown_entity_is_empty(self):
        assert ProvenanceLedger().provenance_chain("10.9/zz") == []


@given(st.lists(st.integers(min_value=0, max_value=5), min_size=0, max_size=30))
def test_chain_linkage_invariants(deltas):
    ledger = ProvenanceLedger()
    ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
    clock = 0
    for delta in deltas:
        clock += delta
        ledger.record_modification("10.1/a", "tick", "tester", ts(clock))
    chain = ledger.provenance_chain("10.1/a")
    assert len(chain) == len(deltas) + 1
    open_snapshots = [snapshot for snapshot in chain if snapshot.invalidated_at is None]
    assert open_snapshots == [chain[-1]]
    for previous, current in zip(chain, chain[1:]):
        assert previous.invalidated_at == current.generated_at


class TestSidecar:
    def test_round_trip(self, tmp_path):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
        ledger.record_modification("10.1/a", "fix", "curator", ts(5))
        ledger.record_creation("oci:020010036013910-020010036013911", "file:x", "tester", ts(1))
        path = tmp_path / "provenance.jsonl"
        count = ledger.save(path)
        assert count == 3

        loaded = ProvenanceLedger.load(path)
        assert len(loaded) == 2
        original = [s.to_dict() for s in ledger.provenance_chain("10.1/a")]
        reloaded = [s.to_dict() for s in loaded.provenance_chain("10.1/a")]
        assert original == reloaded

    def test_save_is_deterministic(self, tmp_path):
        ledger = ProvenanceLedger()
        ledger.record_creation("10.1/b", "file:x", "tester", ts(0))
        ledger.record_creation("10.1/a", "file:x", "tester", ts(0))
        first, second = tmp_path / "one.jsonl", tmp_path / "two.jsonl"
        ledger.save(first)
        ledger.save(second)
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text().splitlines()
        assert '"entity_id":"10.1/a"' in lines[0]

    def test_load_rejects_broken_chain(self, tmp_path):
        path = tmp_path / "provenance.jsonl"
        path.write_text(
            '{"entity_id":"10.1/a","snapshot_number":2,"generated_at":"2022-03-01T12:00:00Z",'
            '"invalidated_at":null,"agent":"t","source":"s","change_type":"modification",'
            '"description":""}\n'
        )
        with pytest.raises(IoFailure):
            ProvenanceLedger.load(path)

    def test_naive_timestamps_assumed_utc(self):
        ledger = ProvenanceLedger()
        snapshot = ledger.record_creation(
            "10.1/a", "file:x", "tester", datetime.datetime(2022, 3, 1, 12, 0, 0, 500000)
        )
        assert snapshot.to_dict()["generated_at"] == "2022-03-01T12:00:00Z"
