import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS = REPO_ROOT / "corpus"

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def py_corpus_root() -> Path:
    return CORPUS / "python_project"


@pytest.fixture(scope="session")
def java_corpus_root() -> Path:
    return CORPUS / "java_project"


@pytest.fixture(scope="session")
def parsed_corpus(py_corpus_root, java_corpus_root):
    """(index, records) per language, parsed once per session."""
    from teeport.analyzer import parse_project

    return {
        "python": parse_project(py_corpus_root, "python"),
        "java": parse_project(java_corpus_root, "java"),
    }


@pytest.fixture(scope="session")
def corpus_records(parsed_corpus):
    by_qualname = {}
    for _, records in parsed_corpus.values():
        for record in records:
            by_qualname[record.qualname] = record
    return by_qualname
