"""Grammar adapter for Java sources.

A deliberately small declaration-and-call-site scanner: comments and string
literals are blanked out (preserving offsets), classes and methods are found
by signature patterns, and spans come from brace tracking. It covers the
plain static-utility subset this pipeline targets; exotic declarations are
simply not indexed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..semtypes import Param, Signature
from .python_source import FileScan, RawCall, RawFunction

JDK_CLASSES = {
    "Arrays", "Base64", "Collections", "Double", "HexFormat", "Integer",
    "Long", "Mac", "Math", "MessageDigest", "Objects", "Random",
    "SecureRandom", "String", "StringBuilder", "System",
}

_KEYWORDS = {"if", "for", "while", "switch", "catch", "return", "synchronized", "assert"}

_TYPE_MAP = {
    "int": "int", "long": "int", "short": "int", "byte": "int",
    "Integer": "int", "Long": "int",
    "double": "float", "float": "float", "Double": "float", "Float": "float",
    "boolean": "bool", "Boolean": "bool",
    "String": "string",
    "byte[]": "bytes",
    "int[]": "array-of-int", "long[]": "array-of-int",
    "double[]": "array-of-float", "float[]": "array-of-float",
    "boolean[]": "array-of-bool",
    "String[]": "array-of-string",
}

_CLASS_RE = re.compile(r"\bclass\s+(\w+)")
_METHOD_RE = re.compile(
    r"^\s*((?:(?:public|private|protected|static|final|synchronized|native)\s+)+)"
    r"([\w\[\]]+)\s+(\w+)\s*\(([^)]*)\)\s*(?:throws\s+[\w.,\s]+?)?\{"
)
_FIELD_RE = re.compile(
    r"^\s*(?:(?:public|private|protected|static|final)\s+)*[\w\[\]<>]+\s+(\w+)\s*(?:=|;)"
)
_CALL_RE = re.compile(r"(new\s+\w+|(?:[A-Za-z_]\w*\.)*[A-Za-z_]\w*)\s*\(")


def _blank_literals(text: str) -> str:
    """Replace comment and string/char literal contents with spaces."""
    out = list(text)
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                out[i] = " "
                i += 1
        elif ch == "/" and i + 1 < n and text[i + 1] == "*":
            while i < n and not (text[i] == "*" and i + 1 < n and text[i + 1] == "/"):
                if text[i] != "\n":
                    out[i] = " "
                i += 1
            if i + 1 < n:
                out[i] = " "
                out[i + 1] = " "
                i += 2
        elif ch in ('"', "'"):
            quote = ch
            out[i] = " "
            i += 1
            while i < n and text[i] != quote:
                if text[i] == "\\":
                    out[i] = " "
                    i += 1
                    if i < n and text[i] != "\n":
                        out[i] = " "
                    i += 1
                    continue
                if text[i] != "\n":
                    out[i] = " "
                i += 1
            if i < n:
                out[i] = " "
                i += 1
        else:
            i += 1
    return "".join(out)


def _semtype(java_type: str) -> str:
    return _TYPE_MAP.get(java_type.strip(), "unknown")


def _parse_params(text: str) -> tuple[Param, ...]:
    text = text.strip()
    if not text:
        return ()
    params = []
    for chunk in text.split(","):
        parts = chunk.strip().rsplit(" ", 1)
        if len(parts) != 2:
            params.append(Param(chunk.strip() or "arg", "unknown"))
            continue
        java_type, name = parts
        params.append(Param(name.strip(), _semtype(java_type)))
    return tuple(params)


def _close_brace_line(blanked_lines: list[str], start_index: int) -> int:
    depth = 0
    seen_open = False
    for index in range(start_index, len(blanked_lines)):
        for ch in blanked_lines[index]:
            if ch == "{":
                depth += 1
                seen_open = True
            elif ch == "}":
                depth -= 1
                if seen_open and depth == 0:
                    return index + 1
    return len(blanked_lines)


def _collect_calls(blanked_body: str, first_line: int) -> list[RawCall]:
    calls = []
    line_offsets = [0]
    for line in blanked_body.splitlines(keepends=True):
        line_offsets.append(line_offsets[-1] + len(line))
    for match in _CALL_RE.finditer(blanked_body):
        name = match.group(1)
        if name.startswith("new "):
            symbol = "new " + name[4:].strip()
        else:
            if name in _KEYWORDS or name.split(".")[0] in _KEYWORDS:
                continue
            symbol = name
            before = match.start() - 1
            if before >= 0 and blanked_body[before] == ".":
                symbol = f"<expr>.{name}"
        line = next(
            i for i in range(len(line_offsets) - 1)
            if line_offsets[i] <= match.start() < line_offsets[i + 1]
        )
        calls.append(RawCall(symbol, first_line + line))
    return calls


def scan_file(path: Path, rel_path: str) -> FileScan:
    scan = FileScan(rel_path=rel_path)
    try:
        source = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        scan.error = f"{rel_path}: {exc}"
        return scan
    blanked = _blank_literals(source)
    lines = source.splitlines()
    blanked_lines = blanked.splitlines()

    class_match = _CLASS_RE.search(blanked)
    if class_match is None:
        scan.error = f"{rel_path}: no class declaration found"
        return scan
    class_name = class_match.group(1)
    scan.declared.append(class_name)

    field_names = set()
    for line in blanked_lines:
        if _METHOD_RE.match(line):
            continue
        m = _FIELD_RE.match(line)
        if m and "class" not in line and "(" not in line:
            field_names.add(m.group(1))

    index = 0
    while index < len(blanked_lines):
        m = _METHOD_RE.match(blanked_lines[index])
        if m is None:
            index += 1
            continue
        modifiers, ret_type, name, params_text = m.groups()
        is_static = "static" in modifiers.split()
        end_line = _close_brace_line(blanked_lines, index)
        start_line = index + 1
        qualname = f"{class_name}.{name}"
        scan.declared.append(qualname)

        params = list(_parse_params(params_text))
        # Blank the declaration itself so the method name is not seen as
        # a call to itself; real recursion in the body still is.
        decl_line = blanked_lines[index]
        brace_at = decl_line.index("{")
        body_blanked = "\n".join(
            [" " * brace_at + decl_line[brace_at:]] + blanked_lines[index + 1 : end_line]
        )
        uses_instance_state = False
        if not is_static:
            body_idents = set(re.findall(r"[A-Za-z_]\w*", body_blanked))
            uses_instance_state = "this" in body_blanked or bool(
                field_names & body_idents
            )
            if uses_instance_state:
                # Same convention as the Python adapter: an instance-state
                # receiver is an unknown-typed parameter.
                params.insert(0, Param("this", "unknown"))

        scan.functions.append(
            RawFunction(
                qualname=qualname,
                signature=Signature(tuple(params), _semtype(ret_type)),
                body="\n".join(lines[index:end_line]),
                span=(start_line, end_line),
                calls=_collect_calls(body_blanked, start_line),
                invoke_static=False,
            )
        )
        index = end_line

    return scan


def is_runtime_symbol(symbol: str) -> bool:
    if symbol.startswith("new "):
        return symbol[4:] in JDK_CLASSES
    return symbol.split(".", 1)[0] in JDK_CLASSES
