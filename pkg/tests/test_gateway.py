"""Chat sessions, transcript record/replay, and prompt rendering."""

import pytest

from teeport.errors import (
    BackendUnreachableError,
    GatewayError,
    PromptBindingError,
    ReplayDivergenceError,
)
from teeport.gateway import (
    LiveBackend,
    RecordingBackend,
    ReplayBackend,
    Role,
    ScriptedBackend,
    TranscriptStore,
    ask,
    make_backend,
    usage_report,
)
from teeport.prompts import render_prompt


def record_session(tmp_path, replies, prompts, session_id="s1", system=None):
    store = TranscriptStore(tmp_path / "transcripts")
    backend = RecordingBackend(ScriptedBackend(replies), store)
    session = backend.open_session(session_id, system)
    for prompt in prompts:
        ask(session, prompt)
    return store, session


def test_scripted_and_usage():
    backend = ScriptedBackend(["one", "two"])
    session = backend.open_session("s")
    assert usage_report(session) == (0, 0, 0)
    assert ask(session, "first prompt") == "one"
    assert ask(session, "second prompt") == "two"
    prompt_tokens, completion_tokens, turns = usage_report(session)
    assert turns == 4
    assert prompt_tokens == sum(p for p, _ in session.ledger)
    assert usage_report(session) == usage_report(session)  # pure read


def test_turns_alternate():
    backend = ScriptedBackend(["a"])
    session = backend.open_session("s")
    session.turns.append((Role.USER, "dangling"))
    with pytest.raises(GatewayError):
        ask(session, "x")


def test_record_then_replay_verbatim(tmp_path):
    store, recorded = record_session(tmp_path, ["alpha\nbeta", "gamma"], ["p one", "p two"])
    replay = ReplayBackend(store)
    session = replay.open_session("s1")
    assert ask(session, "p one") == "alpha\nbeta"
    assert ask(session, "p two") == "gamma"
    # Token counts come from the recorded ledger.
    assert session.ledger == recorded.ledger


def test_replay_tolerates_whitespace_but_not_content(tmp_path):
    store, _ = record_session(tmp_path, ["r"], ["hello   world"])
    session = ReplayBackend(store).open_session("s1")
    assert ask(session, "hello world") == "r"


def test_replay_divergence_names_turn(tmp_path):
    store, _ = record_session(tmp_path, ["r1", "r2"], ["first", "second"])
    session = ReplayBackend(store).open_session("s1")
    ask(session, "first")
    with pytest.raises(ReplayDivergenceError) as err:
        ask(session, "SOMETHING ELSE")
    assert err.value.turn_index == 3


def test_replay_with_system_prefix(tmp_path):
    store, _ = record_session(tmp_path, ["ok"], ["go"], system="be terse")
    session = ReplayBackend(store).open_session("s1", "be terse")
    assert ask(session, "go") == "ok"
    with pytest.raises(ReplayDivergenceError):
        ReplayBackend(store).open_session("s1", "different system text")


def test_transcript_round_trip_exact_text(tmp_path):
    tricky = 'line1\n  indented "quoted"\n\ntrailing\n'
    store, _ = record_session(tmp_path, [tricky], ["p"])
    _, turns = store.load("s1")
    assert turns[1].text == tricky
    assert turns[0].role is Role.USER


def test_live_backend_retry_exhaustion():
    calls = []

    def failing_transport(payload):
        calls.append(1)
        raise ConnectionError("boom")

    backend = LiveBackend(url="http://x", model="m", transport=failing_transport, retry_limit=3)
    session = backend.open_session("s")
    with pytest.raises(BackendUnreachableError, match="after 3 attempts"):
        ask(session, "hi")
    assert len(calls) == 3


def test_live_backend_recovers_within_retry_budget():
    state = {"n": 0}

    def flaky(payload):
        state["n"] += 1
        if state["n"] < 3:
            raise ConnectionError("boom")
        return {
            "choices": [{"message": {"content": "fine"}}],
            "usage": {"prompt_tokens": 5, "completion_tokens": 2},
        }

    backend = LiveBackend(url="http://x", model="m", transport=flaky, retry_limit=3)
    session = backend.open_session("s")
    assert ask(session, "hi") == "fine"
    assert session.ledger == [(5, 2)]


def test_make_backend_ids(tmp_path):
    assert make_backend("scripted", script=["x"]).backend_id == "scripted"
    assert make_backend("replay", tmp_path).backend_id == "replay"
    assert make_backend("record+scripted", tmp_path, ["x"]).backend_id == "record+scripted"
    with pytest.raises(GatewayError):
        make_backend("telepathy")


# ---------------------------------------------------------------------------
# Prompt templates


def test_identify_round_1_contains_contract_phrase():
    text = render_prompt(
        "identify-round-1",
        {
            "crypto_categories": "Encryption, Decryption",
            "serialization_categories": "Serialization",
            "code": "def f(): pass",
        },
    )
    assert "Please respond with 'Yes'" in text
    assert "def f(): pass" in text


def test_template_without_placeholders_is_identity():
    assert (
        render_prompt("identify-round-2", {})
        == "What type of operation does this function involve?"
    )


def test_missing_binding_listed():
    with pytest.raises(PromptBindingError) as err:
        render_prompt("transform-objective", {})
    assert err.value.missing == ["code"]


def test_rendering_is_deterministic():
    bindings = {"code": "x = {1: 2}"}
    a = render_prompt("transform-objective", bindings)
    b = render_prompt("transform-objective", bindings)
    assert a == b and "{1: 2}" in a
