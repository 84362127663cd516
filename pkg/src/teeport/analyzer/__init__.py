"""Project parsing, the user-defined declaration index, and leaf extraction.

Call-target resolution is name-based within the project index: a call whose
terminal name matches any user-declared function or method resolves as
USER_DEFINED, ambiguity included. This is deliberately conservative; it can
only shrink the leaf set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import AnalysisError, UnsupportedLanguageError
from ..records import (
    CallKind,
    CallSite,
    FunctionRecord,
    NATIVE_TARGET,
    make_fqid,
)
from ..semtypes import is_basic
from . import java_source, python_source
from .mappings import MappingTable, load_default_table

__all__ = [
    "ProjectIndex",
    "LeafVerdict",
    "Disqualifier",
    "parse_project",
    "extract_leaf_functions",
    "map_library_call",
]

_ADAPTERS = {
    "python": (python_source, "*.py"),
    "java": (java_source, "*.java"),
}


@dataclass
class ProjectIndex:
    language: str
    declarations: set[str]  # qualified user-defined symbols
    files: list[str]
    diagnostics: list[str] = field(default_factory=list)

    @property
    def simple_names(self) -> set[str]:
        return {q.rsplit(".", 1)[-1] for q in self.declarations}


class Disqualifier(str, enum.Enum):
    CALLS_USER_FUNCTION = "CALLS_USER_FUNCTION"
    NON_BASIC_ARGUMENT = "NON_BASIC_ARGUMENT"
    UNMAPPABLE_LIBRARY_CALL = "UNMAPPABLE_LIBRARY_CALL"


@dataclass(frozen=True)
class LeafVerdict:
    reasons: tuple[Disqualifier, ...]

    @property
    def is_leaf(self) -> bool:
        return not self.reasons


def _classify_symbol(
    symbol: str, simple_names: set[str], adapter, language: str, table: MappingTable
) -> CallKind:
    terminal = symbol.rsplit(".", 1)[-1]
    if terminal.startswith("new "):
        terminal = terminal[4:]
    # A call qualified by a known runtime module or JDK class cannot be a
    # project function, regardless of terminal-name collisions.
    if ("." in symbol or symbol.startswith("new ")) and adapter.is_runtime_symbol(symbol):
        return CallKind.STANDARD_LIBRARY
    if terminal in simple_names:
        return CallKind.USER_DEFINED
    if table.is_known_symbol(symbol, language) or adapter.is_runtime_symbol(symbol):
        return CallKind.STANDARD_LIBRARY
    return CallKind.UNKNOWN


def parse_project(
    root_path, language: str, table: MappingTable | None = None
) -> tuple[ProjectIndex, list[FunctionRecord]]:
    """Parse every source file under root_path for one language.

    Individual file failures become index diagnostics; the remaining files
    are still indexed. Raises only for an unsupported language or when not
    a single file parses.
    """
    if language not in _ADAPTERS:
        raise UnsupportedLanguageError(
            f"no grammar adapter registered for language {language!r}"
        )
    adapter, pattern = _ADAPTERS[language]
    table = table or load_default_table()
    root = Path(root_path)

    scans = []
    for path in sorted(root.rglob(pattern)):
        rel = path.relative_to(root).as_posix()
        scans.append(adapter.scan_file(path, rel))

    good = [s for s in scans if s.error is None]
    if not good:
        raise AnalysisError(f"zero parsable files under {root} for {language!r}")

    declarations: set[str] = set()
    for scan in good:
        declarations.update(scan.declared)
    index = ProjectIndex(
        language=language,
        declarations=declarations,
        files=[s.rel_path for s in good],
        diagnostics=[s.error for s in scans if s.error is not None],
    )

    simple_names = index.simple_names
    records = []
    for scan in good:
        for raw in scan.functions:
            call_sites = [
                CallSite(
                    call.symbol,
                    _classify_symbol(call.symbol, simple_names, adapter, language, table),
                    call.line,
                )
                for call in raw.calls
            ]
            record = FunctionRecord(
                fqid=make_fqid(scan.rel_path, raw.qualname, raw.signature),
                language=language,
                path=scan.rel_path,
                qualname=raw.qualname,
                signature=raw.signature,
                body=raw.body,
                span=raw.span,
                call_sites=call_sites,
                invoke_static=raw.invoke_static,
            )
            record.validate()
            records.append(record)
    return index, records


def extract_leaf_functions(
    index: ProjectIndex,
    records: list[FunctionRecord],
    table: MappingTable | None = None,
) -> list[tuple[FunctionRecord, LeafVerdict]]:
    """Verdict per record; total over its input, never raises per-record."""
    table = table or load_default_table()
    results = []
    for record in records:
        reasons = []
        if any(c.kind is CallKind.USER_DEFINED for c in record.call_sites):
            reasons.append(Disqualifier.CALLS_USER_FUNCTION)
        basic = all(is_basic(p.semtype) for p in record.signature.params) and is_basic(
            record.signature.returns
        )
        if not basic:
            reasons.append(Disqualifier.NON_BASIC_ARGUMENT)
        unmappable = False
        for site in record.call_sites:
            if site.kind is CallKind.UNKNOWN:
                unmappable = True
            elif site.kind is CallKind.STANDARD_LIBRARY:
                if table.map_call(site.callee_symbol, record.language, NATIVE_TARGET) is None:
                    unmappable = True
        if unmappable:
            reasons.append(Disqualifier.UNMAPPABLE_LIBRARY_CALL)
        results.append((record, LeafVerdict(tuple(reasons))))
    return results


def map_library_call(
    symbol: str, from_lang: str, to_lang: str, table: MappingTable | None = None
) -> str | None:
    table = table or load_default_table()
    return table.map_call(symbol, from_lang, to_lang)
