"""Brute-force leaf oracle, independent of the analyzer's code paths.

Declarations come from raw regex scans of the source files; the call-graph
test string-matches every declared name against every body; basic-argument
and library-mappability checks are regex reimplementations driven directly
by the mapping data file. Known gap (documented): a declared name invoked
through an attribute receiver (``obj.helper()``) is seen by the analyzer
but not by the bare-name regex here; the corpus avoids that shape, as it
avoids shadowing generally.
"""

from __future__ import annotations

import re
from pathlib import Path

PY_BASIC = {
    "int", "float", "bool", "str", "bytes",
    "list[int]", "list[float]", "list[bool]", "list[str]", "list[bytes]",
}
JAVA_BASIC = {
    "int", "long", "short", "byte", "double", "float", "boolean", "String",
    "byte[]", "int[]", "long[]", "double[]", "float[]", "boolean[]", "String[]",
}
_KEYWORDS = {
    "if", "for", "while", "switch", "catch", "return", "throw", "assert",
    "and", "or", "not", "in", "is", "elif", "else", "with", "raise",
}


def load_mapping_symbols(mapping_path: Path) -> dict:
    """language -> (set of last-component names, set of 'new X' java ctors)."""
    table: dict = {"python": set(), "java": set(), "rust": set()}
    ctors = set()
    for line in mapping_path.read_text().splitlines():
        line = line.strip()
        m = re.match(r"^(python|java|rust):\s*(.+)$", line)
        if not m:
            continue
        lang, pattern = m.groups()
        symbol = pattern.split("(", 1)[0].strip()
        if symbol.startswith("new "):
            ctors.add(symbol)
            continue
        table[lang].add(symbol.split(".")[-1].split("::")[-1].lstrip("."))
    return {"names": table, "java_ctors": ctors}


def scan_declared_names(root: Path, language: str) -> set[str]:
    names = set()
    if language == "python":
        for path in root.rglob("*.py"):
            names.update(re.findall(r"^\s*def\s+(\w+)\s*\(", path.read_text(), re.M))
    else:
        for path in root.rglob("*.java"):
            names.update(
                re.findall(
                    r"^\s*(?:public|private|protected)[^=;{()]*?(\w+)\s*\([^)]*\)",
                    path.read_text(),
                    re.M,
                )
            )
    return names


def _python_signature_basic(decl_line: str, body_rest: str) -> bool:
    m = re.match(r"\s*def\s+\w+\s*\((.*)\)\s*->\s*([\w\[\]]+)\s*:", decl_line)
    if not m:
        return False  # no return annotation
    params_text, ret = m.groups()
    if ret not in PY_BASIC:
        return False
    params_text = params_text.strip()
    if not params_text:
        return True
    for chunk in params_text.split(","):
        chunk = chunk.strip()
        if chunk in ("self", "cls"):
            if re.search(rf"\b{chunk}\b", body_rest):
                return False
            continue
        pm = re.match(r"\w+\s*:\s*([\w\[\]]+)$", chunk)
        if not pm or pm.group(1) not in PY_BASIC:
            return False
    return True


def _java_signature_basic(decl_line: str, body_rest: str, is_static: bool) -> bool:
    m = re.match(
        r"\s*(?:(?:public|private|protected|static|final|synchronized)\s+)*"
        r"([\w\[\]]+)\s+\w+\s*\((.*?)\)",
        decl_line,
    )
    if not m:
        return False
    ret, params_text = m.groups()
    if ret not in JAVA_BASIC:
        return False
    if not is_static and re.search(r"\bthis\b", body_rest):
        return False
    params_text = params_text.strip()
    if not params_text:
        return True
    for chunk in params_text.split(","):
        parts = chunk.strip().rsplit(" ", 1)
        if len(parts) != 2 or parts[0].strip() not in JAVA_BASIC:
            return False
    return True


def _call_tokens(body_rest: str, language: str) -> tuple[set[str], set[str]]:
    text = body_rest
    ctors = set()
    if language == "java":
        for m in re.finditer(r"new\s+(\w+)\s*\(", text):
            ctors.add("new " + m.group(1))
        text = re.sub(r"new\s+\w+\s*\(", "(", text)
    tokens = set()
    for m in re.finditer(r"([\w.]+)\s*\(", text):
        name = m.group(1).strip(".")
        if name.split(".")[-1] in _KEYWORDS or name in _KEYWORDS:
            continue
        tokens.add(name.split(".")[-1])
    return tokens, ctors


def oracle_is_leaf(record, declared: set[str], mapping: dict) -> bool:
    body_lines = record.body.splitlines()
    decl_line = body_lines[0]
    body_rest = "\n".join(body_lines[1:])

    # Call-graph test: string-match every declared name against the body.
    for name in declared:
        if re.search(rf"(?<![\w.]){re.escape(name)}\s*\(", body_rest):
            return False

    is_static = "static" in decl_line
    if record.language == "python":
        if not _python_signature_basic(decl_line, body_rest):
            return False
    else:
        if not _java_signature_basic(decl_line, body_rest, is_static):
            return False

    tokens, ctors = _call_tokens(body_rest, record.language)
    known = mapping["names"][record.language]
    if not tokens <= known:
        return False
    if not ctors <= mapping["java_ctors"]:
        return False
    return True
