"""Project parsing, leaf extraction, and the library mapping table."""

from pathlib import Path

import pytest

import corpus_expectations as gold
from leaf_oracle import load_mapping_symbols, oracle_is_leaf, scan_declared_names

from teeport.analyzer import (
    Disqualifier,
    extract_leaf_functions,
    map_library_call,
    parse_project,
)
from teeport.analyzer.mappings import load_default_table
from teeport.errors import AnalysisError, UnsupportedLanguageError
from teeport.records import CallKind

MAPPING_FILE = Path("src/teeport/data/library_mappings.txt")


# ---------------------------------------------------------------------------
# parse_project


def test_python_declaration_count(parsed_corpus):
    index, records = parsed_corpus["python"]
    assert len(records) == gold.PY_DECLARATION_COUNT
    assert len(index.declarations) == gold.PY_DECLARATION_COUNT


def test_java_method_count(parsed_corpus):
    _, records = parsed_corpus["java"]
    assert len(records) == gold.JAVA_METHOD_COUNT


def test_fqids_unique(parsed_corpus):
    for _, records in parsed_corpus.values():
        fqids = [r.fqid for r in records]
        assert len(set(fqids)) == len(fqids)


def test_unsupported_language():
    with pytest.raises(UnsupportedLanguageError):
        parse_project("corpus/python_project", "cobol")


def test_empty_project_rejected(tmp_path):
    with pytest.raises(AnalysisError, match="zero parsable"):
        parse_project(tmp_path, "python")


def test_syntax_error_reported_others_survive(tmp_path):
    (tmp_path / "good.py").write_text("def fine(x: int) -> int:\n    return x\n")
    (tmp_path / "bad.py").write_text("def broken(:\n")
    index, records = parse_project(tmp_path, "python")
    assert [r.qualname for r in records] == ["fine"]
    assert len(index.diagnostics) == 1
    assert "bad.py" in index.diagnostics[0]


def test_call_sites_classified(corpus_records):
    record = corpus_records["sha256_hex"]
    kinds = {c.callee_symbol: c.kind for c in record.call_sites}
    assert kinds["hashlib.sha256"] is CallKind.STANDARD_LIBRARY

    record = corpus_records["clean_and_upper"]
    kinds = {c.callee_symbol: c.kind for c in record.call_sites}
    assert kinds["helper_strip"] is CallKind.USER_DEFINED


def test_unused_receiver_method_marked_static(corpus_records):
    assert corpus_records["TokenCache.describe"].invoke_static
    assert not corpus_records["TokenCache.mask"].invoke_static


# ---------------------------------------------------------------------------
# extract_leaf_functions


def leaf_sets(index, records):
    verdicts = extract_leaf_functions(index, records)
    leaf = {r.qualname for r, v in verdicts if v.is_leaf}
    non_leaf = {r.qualname for r, v in verdicts if not v.is_leaf}
    return leaf, non_leaf, dict((r.qualname, v) for r, v in verdicts)


def test_python_leaf_set(parsed_corpus):
    leaf, non_leaf, _ = leaf_sets(*parsed_corpus["python"])
    assert leaf == gold.PY_LEAF
    assert non_leaf == gold.PY_NON_LEAF


def test_java_leaf_set(parsed_corpus):
    leaf, non_leaf, _ = leaf_sets(*parsed_corpus["java"])
    assert leaf == gold.JAVA_LEAF
    assert non_leaf == gold.JAVA_NON_LEAF


def test_disqualifier_reasons(parsed_corpus):
    _, _, verdicts = leaf_sets(*parsed_corpus["python"])
    assert Disqualifier.CALLS_USER_FUNCTION in verdicts["fibonacci"].reasons
    assert Disqualifier.CALLS_USER_FUNCTION in verdicts["clean_and_upper"].reasons
    assert Disqualifier.NON_BASIC_ARGUMENT in verdicts["hash_file_summary"].reasons
    assert Disqualifier.NON_BASIC_ARGUMENT in verdicts["TokenCache.cached_token"].reasons
    assert Disqualifier.UNMAPPABLE_LIBRARY_CALL in verdicts["pickle_roundtrip"].reasons
    assert Disqualifier.UNMAPPABLE_LIBRARY_CALL in verdicts["fetch_remote"].reasons


def test_is_leaf_iff_no_reasons(parsed_corpus):
    for language in ("python", "java"):
        index, records = parsed_corpus[language]
        for _, verdict in extract_leaf_functions(index, records):
            assert verdict.is_leaf == (len(verdict.reasons) == 0)


def test_oracle_equivalence(parsed_corpus, py_corpus_root, java_corpus_root):
    """The analyzer's leaf set equals the brute-force oracle's, exactly."""
    mapping = load_mapping_symbols(MAPPING_FILE)
    for language, root in (("python", py_corpus_root), ("java", java_corpus_root)):
        index, records = parsed_corpus[language]
        declared = scan_declared_names(root, language)
        analyzer_leaf = {
            r.qualname for r, v in extract_leaf_functions(index, records) if v.is_leaf
        }
        oracle_leaf = {
            r.qualname for r in records if oracle_is_leaf(r, declared, mapping)
        }
        assert analyzer_leaf == oracle_leaf


def test_monotonicity_new_declaration_only_shrinks(parsed_corpus):
    # Declaring a name that collides with a library call flips that call to
    # USER_DEFINED, so the leaf set must shrink or stay equal, never grow.
    from teeport.analyzer import ProjectIndex, _classify_symbol  # noqa: F401

    index, records = parsed_corpus["python"]
    base_leaf = {r.qualname for r, v in extract_leaf_functions(index, records) if v.is_leaf}

    import copy

    poisoned = copy.deepcopy(records)
    for record in poisoned:
        for i, site in enumerate(record.call_sites):
            if site.callee_symbol.rsplit(".", 1)[-1] == "sha256":
                record.call_sites[i] = type(site)(
                    site.callee_symbol, CallKind.USER_DEFINED, site.line
                )
    new_leaf = {r.qualname for r, v in extract_leaf_functions(index, poisoned) if v.is_leaf}
    assert new_leaf <= base_leaf
    assert "sha256_hex" not in new_leaf


# ---------------------------------------------------------------------------
# map_library_call


def test_square_root_row():
    assert map_library_call("Math.sqrt", "java", "rust") == "f64::sqrt(x)"
    assert map_library_call("math.sqrt", "python", "rust") == "f64::sqrt(x)"


def test_sha256_row_exists_both_directions():
    assert map_library_call("hashlib.sha256", "python", "rust") is not None
    assert map_library_call("MessageDigest.getInstance", "java", "rust") is not None


def test_identity_mapping():
    assert map_library_call("anything.at.all", "python", "python") == "anything.at.all"


def test_unknown_symbol_not_found():
    assert map_library_call("numpy.fft.fft", "python", "rust") is None


def test_every_mapping_covers_all_languages():
    table = load_default_table()
    for mapping in table.mappings:
        assert set(mapping.patterns) >= {"python", "java", "rust"}, mapping.concept
