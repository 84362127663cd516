"""Workspace layout, persistence round-trips, and config handling."""

import pytest

from teeport.config import PipelineConfig, dump_config, load_config
from teeport.errors import ConfigConflictError, InvariantError
from teeport.records import CallKind, CallSite, FunctionRecord, make_fqid
from teeport.semtypes import Param, Signature
from teeport.workspace import SUBDIRS, init_workspace, open_workspace


def make_record(body="return data", qualname="helpers.sha_hex"):
    sig = Signature((Param("data", "string"),), "string")
    return FunctionRecord(
        fqid=make_fqid("helpers.py", qualname, sig),
        language="python",
        path="helpers.py",
        qualname=qualname,
        signature=sig,
        body=body,
        span=(10, 12),
        call_sites=[CallSite("hashlib.sha256", CallKind.STANDARD_LIBRARY, 11)],
    )


def test_defaults_match_stated_constants():
    config = PipelineConfig()
    assert config.refinement_threshold == 20
    assert config.coverage_stagnation_limit == 3
    assert config.few_shot_example_count == 3
    assert config.run_repeat_count == 5


def test_config_round_trip():
    config = PipelineConfig(refinement_threshold=7, backend_id="scripted")
    assert load_config(dump_config(config)) == config


def test_init_workspace_creates_layout(tmp_path):
    ws = init_workspace(tmp_path / "ws")
    for sub in SUBDIRS:
        assert (ws.root / sub).is_dir()
    assert "refinement_threshold=20" in (ws.root / "config.txt").read_text()


def test_reopen_same_config_is_idempotent(tmp_path):
    root = tmp_path / "ws"
    ws1 = init_workspace(root)
    before = sorted(p.name for p in root.iterdir())
    ws2 = init_workspace(root)
    assert sorted(p.name for p in root.iterdir()) == before
    assert ws1.config == ws2.config


def test_reopen_with_conflicting_config_is_reported(tmp_path):
    root = tmp_path / "ws"
    init_workspace(root, PipelineConfig(refinement_threshold=20))
    with pytest.raises(ConfigConflictError, match="refinement_threshold"):
        init_workspace(root, PipelineConfig(refinement_threshold=10))
    # Stored config is untouched.
    assert open_workspace(root).config.refinement_threshold == 20


def test_persist_round_trip(tmp_path):
    ws = init_workspace(tmp_path / "ws")
    record = make_record()
    record_id = ws.persist(record)
    assert ws.load(record_id) == record


def test_invariant_violation_rejected_before_write(tmp_path):
    ws = init_workspace(tmp_path / "ws")
    record = make_record()
    record.fqid = ""
    with pytest.raises(InvariantError):
        ws.persist(record)
    assert ws.list_ids() == []


def test_identical_content_gets_distinct_ids(tmp_path):
    # Id-collision behavior enumerated over a 1000-write loop: every write
    # of an identical payload must return a fresh id with an equal payload.
    ws = init_workspace(tmp_path / "ws")
    record = make_record()
    ids = [ws.persist(record) for _ in range(1000)]
    assert len(set(ids)) == 1000
    prefixes = {i.rsplit("-", 1)[0] for i in ids}
    assert len(prefixes) == 1  # same content, same content-hash prefix
    assert ws.load(ids[0]) == ws.load(ids[999]) == record


def test_listing_contains_exactly_what_was_persisted(tmp_path):
    ws = init_workspace(tmp_path / "ws")
    ids = {ws.persist(make_record(qualname=f"helpers.f{i}")) for i in range(7)}
    assert set(ws.list_ids()) == ids
    assert set(ws.list_ids(kind=FunctionRecord.KIND)) == ids
    assert ws.list_ids(kind="no-such-kind") == []


def test_config_count_bounds():
    with pytest.raises(InvariantError):
        PipelineConfig(coverage_stagnation_limit=0).validate()
    with pytest.raises(InvariantError):
        PipelineConfig(identification_rounds=4).validate()
