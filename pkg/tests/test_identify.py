"""Three-round sensitivity classification protocol."""

import pytest

import corpus_expectations as gold
from scripted_models import identification_script

from teeport.errors import ClassificationError
from teeport.gateway import ReplayBackend, RecordingBackend, Role, ScriptedBackend, TranscriptStore
from teeport.identify import (
    Label,
    Round1Reply,
    RETRACT,
    SensitivityCategory,
    classify_batch,
    classify_function,
    parse_round_response,
    session_id_for,
)


@pytest.fixture()
def leaf_records(parsed_corpus):
    from teeport.analyzer import extract_leaf_functions

    records = []
    for language in ("python", "java"):
        index, recs = parsed_corpus[language]
        records.extend(r for r, v in extract_leaf_functions(index, recs) if v.is_leaf)
    return records


def scripted_backend(records):
    return ScriptedBackend(identification_script(records))


# ---------------------------------------------------------------------------
# parse_round_response


@pytest.mark.parametrize(
    "text,expected",
    [
        ("Yes.", Round1Reply.YES),
        ("yes", Round1Reply.YES),
        ("YES, it does.", Round1Reply.YES),
        ("No.", Round1Reply.NO),
        ("no!", Round1Reply.NO),
        ("Maybe?", Round1Reply.UNPARSEABLE),
        ("", Round1Reply.UNPARSEABLE),
        ("Sorry, the previous response is incorrect.", Round1Reply.RETRACT),
    ],
)
def test_round1_normalization(text, expected):
    assert parse_round_response(1, text) is expected


def test_round2_list():
    categories, warnings = parse_round_response(2, "[Decryption, Verification]")
    assert categories == [
        SensitivityCategory.DECRYPTION,
        SensitivityCategory.VERIFICATION,
    ]
    assert warnings == []


def test_round2_unknown_category_warns():
    categories, warnings = parse_round_response(2, "[Steganography]")
    assert categories == []
    assert "Steganography" in warnings[0]


def test_round2_retraction():
    assert parse_round_response(2, "Sorry, the previous response is incorrect.") == RETRACT


def test_round3_statement_map_with_nested_commas():
    reply = (
        "[Signature: [hmac.new(key, message, hashlib.sha256).hexdigest()], "
        "Hash: [digest = hashlib.sha256(salt).hexdigest(), return digest]]"
    )
    statements, warnings = parse_round_response(3, reply)
    assert statements["Signature"] == [
        "hmac.new(key, message, hashlib.sha256).hexdigest()"
    ]
    assert statements["Hash"] == [
        "digest = hashlib.sha256(salt).hexdigest()",
        "return digest",
    ]
    assert warnings == []


# ---------------------------------------------------------------------------
# classify_function


def get_record(corpus_records, qualname):
    return corpus_records[qualname]


def test_full_protocol_sensitive(corpus_records, leaf_records):
    record = get_record(corpus_records, "xor_encrypt")
    backend = scripted_backend(leaf_records)
    verdict = classify_function(record, backend.open_session(session_id_for(record)))
    assert verdict.label is Label.SENSITIVE
    assert verdict.categories == [SensitivityCategory.ENCRYPTION]
    for statement in verdict.evidence["Encryption"]:
        assert statement in record.body


def test_no_short_circuits_rounds_2_and_3(corpus_records, leaf_records):
    record = get_record(corpus_records, "clamp")
    backend = scripted_backend(leaf_records)
    session = backend.open_session(session_id_for(record))
    verdict = classify_function(record, session)
    assert verdict.label is Label.NON_SENSITIVE
    assert verdict.categories == []
    # Exactly one USER/ASSISTANT pair in the transcript.
    assert len(session.turns) == 2


def test_retraction_at_round_2(corpus_records, leaf_records):
    record = get_record(corpus_records, "hypotenuse")
    backend = scripted_backend(leaf_records)
    verdict = classify_function(record, backend.open_session(session_id_for(record)))
    assert verdict.label is Label.NON_SENSITIVE
    assert verdict.retracted_at_round == 2


def test_retraction_at_round_3(corpus_records, leaf_records):
    record = get_record(corpus_records, "normalize_spaces")
    backend = scripted_backend(leaf_records)
    verdict = classify_function(record, backend.open_session(session_id_for(record)))
    assert verdict.label is Label.NON_SENSITIVE
    assert verdict.retracted_at_round == 3


def test_unknown_category_flips_to_non_sensitive(corpus_records, leaf_records):
    record = get_record(corpus_records, "shout")
    backend = scripted_backend(leaf_records)
    verdict = classify_function(record, backend.open_session(session_id_for(record)))
    assert verdict.label is Label.NON_SENSITIVE
    assert any("Steganography" in w for w in verdict.warnings)


def test_unparseable_round1_raises(corpus_records, leaf_records):
    record = get_record(corpus_records, "CryptoKit.checksum")
    backend = scripted_backend(leaf_records)
    with pytest.raises(ClassificationError):
        classify_function(record, backend.open_session(session_id_for(record)))


def test_bogus_evidence_dropped(corpus_records):
    record = get_record(corpus_records, "sha256_hex")
    replies = [
        "Yes.",
        "[Hash, Encryption]",
        "[Hash: [return hashlib.sha256(data.encode()).hexdigest()], "
        "Encryption: [cipheresque line that is not in the body]]",
    ]
    backend = ScriptedBackend(replies)
    verdict = classify_function(record, backend.open_session("adhoc"))
    assert verdict.label is Label.SENSITIVE
    assert verdict.categories == [SensitivityCategory.HASH]
    assert any("no surviving evidence" in w for w in verdict.warnings)


def test_round1_only_mode(corpus_records, leaf_records):
    record = get_record(corpus_records, "sha256_hex")
    backend = scripted_backend(leaf_records)
    session = backend.open_session(session_id_for(record))
    verdict = classify_function(record, session, rounds=1)
    assert verdict.label is Label.SENSITIVE
    assert verdict.protocol_rounds == 1
    assert len(session.turns) == 2


# ---------------------------------------------------------------------------
# classify_batch


def test_batch_counts_and_isolation(leaf_records):
    backend = scripted_backend(leaf_records)
    verdicts, summary, unresolved = classify_batch(leaf_records, backend)
    gold_sensitive = set(gold.PY_SENSITIVE) | set(gold.JAVA_SENSITIVE)
    got_sensitive = {v.fqid.split("::")[1] for v in verdicts if v.label is Label.SENSITIVE}
    assert got_sensitive == gold_sensitive
    assert summary.sensitive == len(gold_sensitive)
    assert summary.unresolved == 1  # the scripted unparseable function
    assert len(unresolved) == 1
    assert summary.sensitive + summary.non_sensitive == len(verdicts)


def test_batch_empty():
    verdicts, summary, unresolved = classify_batch([], ScriptedBackend([]))
    assert verdicts == [] and unresolved == {}
    assert (summary.sensitive, summary.non_sensitive, summary.unresolved) == (0, 0, 0)


def test_replay_idempotence(tmp_path, corpus_records, leaf_records):
    record = get_record(corpus_records, "salted_digest")
    store = TranscriptStore(tmp_path / "t")
    recording = RecordingBackend(scripted_backend(leaf_records), store)
    first = classify_function(
        record, recording.open_session(session_id_for(record))
    )
    replay = ReplayBackend(store)
    second = classify_function(record, replay.open_session(session_id_for(record)))
    third = classify_function(record, replay.open_session(session_id_for(record)))
    assert first.to_doc() == second.to_doc() == third.to_doc()
    assert set(second.evidence) == {"Hash", "Random Number Generation"}
