"""Cross-language library-call equivalence table.

The table ships as an editable data file of one-concept-per-stanza entries
(see data/library_mappings.txt). Lookups are deterministic and name-based:
a pattern's symbol is its text up to the first parenthesis, and patterns
beginning with "." match a call through any receiver. A miss is reported
as not-found, never guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import AnalysisError
from ..records import LANGUAGES, validate_language


@dataclass(frozen=True)
class LibraryMapping:
    concept: str
    patterns: dict  # language id -> call pattern string

    def validate(self) -> None:
        missing = [lang for lang in LANGUAGES if lang not in self.patterns]
        if missing:
            raise AnalysisError(
                f"mapping {self.concept!r} missing languages: {missing}"
            )


def _pattern_symbol(pattern: str) -> str:
    return pattern.split("(", 1)[0].strip()


def _last_component(symbol: str) -> str:
    tail = symbol.rsplit(".", 1)[-1]
    return tail.rsplit("::", 1)[-1]


class MappingTable:
    def __init__(self, mappings: list[LibraryMapping]):
        for m in mappings:
            m.validate()
        self.mappings = mappings

    def _matches(self, symbol: str, pattern: str) -> bool:
        psym = _pattern_symbol(pattern)
        if psym.startswith("."):
            return "." in symbol and _last_component(symbol) == psym[1:]
        if symbol == psym:
            return True
        return _last_component(symbol) == _last_component(psym)

    def find_concept(self, symbol: str, language: str) -> LibraryMapping | None:
        validate_language(language)
        for mapping in self.mappings:
            if self._matches(symbol, mapping.patterns[language]):
                return mapping
        return None

    def is_known_symbol(self, symbol: str, language: str) -> bool:
        return self.find_concept(symbol, language) is not None

    def map_call(self, symbol: str, from_lang: str, to_lang: str) -> str | None:
        """Mapped call pattern, or None when the table has no entry."""
        validate_language(from_lang)
        validate_language(to_lang)
        if from_lang == to_lang:
            return symbol
        mapping = self.find_concept(symbol, from_lang)
        if mapping is None:
            return None
        return mapping.patterns[to_lang]


def parse_mapping_file(text: str) -> MappingTable:
    mappings = []
    stanza: dict = {}
    for raw in text.splitlines() + [""]:
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if stanza:
                concept = stanza.pop("concept", None)
                if concept is None:
                    raise AnalysisError("mapping stanza without a concept line")
                mappings.append(LibraryMapping(concept, dict(stanza)))
                stanza = {}
            continue
        key, _, value = line.partition(":")
        if not value:
            raise AnalysisError(f"malformed mapping line: {raw!r}")
        stanza[key.strip()] = value.strip()
    return MappingTable(mappings)


def load_default_table() -> MappingTable:
    data = resources.files("teeport.data").joinpath("library_mappings.txt")
    return parse_mapping_file(data.read_text(encoding="utf-8"))


def load_table(path: str | Path | None = None) -> MappingTable:
    if path is None:
        return load_default_table()
    return parse_mapping_file(Path(path).read_text(encoding="utf-8"))
