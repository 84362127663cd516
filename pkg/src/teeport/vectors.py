"""Typed-literal input-vector format and output canonicalization.

One test case per line, arguments in signature order, literals separated by
whitespace:

    integers        42, -7
    decimals        3.5, -1.25e-3   (always written with "." or an exponent)
    booleans        true, false
    strings         "quoted, with \\" \\n \\t \\\\ and \\u00e9 escapes"
    byte strings    0xdeadbeef      (base16, lowercase; empty bytes are 0x)
    arrays          [1, 2, 3]       (flat, homogeneous)

The same grammar carries function results back from drivers and enclave
calls. Outputs are then canonicalized for byte comparison: trailing newline
stripped, floats re-rendered at 12 significant digits, bytes kept base16.
Values are never coerced across types; an integer literal in a float slot
is a mismatch.
"""

from __future__ import annotations

from typing import Any

from .errors import VectorFormatError
from . import semtypes

FLOAT_CANONICAL_DIGITS = 12

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


# ---------------------------------------------------------------------------
# Emitters


def _escape_string(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ch.isprintable() or ch == " ":
            out.append(ch)
        elif ord(ch) > 0xFFFF:
            out.append(f"\\U{ord(ch):08x}")
        else:
            out.append(f"\\u{ord(ch):04x}")
    out.append('"')
    return "".join(out)


def format_value(value: Any, semtype: str) -> str:
    """Wire form of one value; floats keep enough digits to round-trip."""
    if semtype == "int":
        _expect(type(value) is int, value, semtype)
        return str(value)
    if semtype == "float":
        _expect(type(value) is float, value, semtype)
        return repr(value)
    if semtype == "bool":
        _expect(type(value) is bool, value, semtype)
        return "true" if value else "false"
    if semtype == "string":
        _expect(type(value) is str, value, semtype)
        return _escape_string(value)
    if semtype == "bytes":
        _expect(type(value) in (bytes, bytearray), value, semtype)
        return "0x" + bytes(value).hex()
    if semtypes.is_array(semtype):
        _expect(type(value) is list, value, semtype)
        elem = semtypes.element_type(semtype)
        return "[" + ", ".join(format_value(v, elem) for v in value) + "]"
    raise VectorFormatError(f"cannot format value for semantic type {semtype!r}")


def canonical_text(value: Any, semtype: str) -> str:
    """Comparison form of one value; floats at 12 significant digits."""
    if semtype == "float":
        _expect(type(value) is float, value, semtype)
        return f"{value:.{FLOAT_CANONICAL_DIGITS}g}"
    if semtypes.is_array(semtype):
        _expect(type(value) is list, value, semtype)
        elem = semtypes.element_type(semtype)
        return "[" + ", ".join(canonical_text(v, elem) for v in value) + "]"
    return format_value(value, semtype)


def format_case(values: list[Any], signature: semtypes.Signature) -> str:
    if len(values) != signature.arity():
        raise VectorFormatError(
            f"arity mismatch: {len(values)} values for {signature.arity()} parameters"
        )
    parts = [
        format_value(v, p.semtype) for v, p in zip(values, signature.params)
    ]
    return " ".join(parts)


def _expect(ok: bool, value: Any, semtype: str) -> None:
    if not ok:
        raise VectorFormatError(
            f"value {value!r} does not match semantic type {semtype!r}"
        )


# ---------------------------------------------------------------------------
# Parser


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, why: str) -> VectorFormatError:
        return VectorFormatError(f"{why} at column {self.pos + 1}: {self.text!r}")


def _scan_string(sc: _Scanner) -> str:
    assert sc.peek() == '"'
    sc.pos += 1
    out = []
    while True:
        if sc.pos >= len(sc.text):
            raise sc.fail("unterminated string")
        ch = sc.text[sc.pos]
        if ch == '"':
            sc.pos += 1
            return "".join(out)
        if ch == "\\":
            sc.pos += 1
            if sc.pos >= len(sc.text):
                raise sc.fail("dangling escape")
            esc = sc.text[sc.pos]
            if esc in _UNESCAPES:
                out.append(_UNESCAPES[esc])
                sc.pos += 1
            elif esc in ("u", "U"):
                width = 4 if esc == "u" else 8
                hexpart = sc.text[sc.pos + 1 : sc.pos + 1 + width]
                if len(hexpart) != width:
                    raise sc.fail(f"truncated \\{esc} escape")
                try:
                    out.append(chr(int(hexpart, 16)))
                except (ValueError, OverflowError):
                    raise sc.fail(f"bad \\{esc} escape") from None
                sc.pos += 1 + width
            else:
                raise sc.fail(f"unknown escape \\{esc}")
        else:
            out.append(ch)
            sc.pos += 1


def _scan_array(sc: _Scanner) -> list:
    assert sc.peek() == "["
    sc.pos += 1
    items: list = []
    sc.skip_ws()
    if sc.peek() == "]":
        sc.pos += 1
        return items
    while True:
        items.append(_scan_value(sc))
        sc.skip_ws()
        ch = sc.peek()
        if ch == ",":
            sc.pos += 1
            sc.skip_ws()
            continue
        if ch == "]":
            sc.pos += 1
            return items
        raise sc.fail("expected ',' or ']' in array")


_NUM_CHARS = set("0123456789+-.eE")


def _scan_value(sc: _Scanner):
    sc.skip_ws()
    ch = sc.peek()
    if ch == "":
        raise sc.fail("expected a value")
    if ch == '"':
        return _scan_string(sc)
    if ch == "[":
        return _scan_array(sc)
    if sc.text.startswith("0x", sc.pos) or sc.text.startswith("0X", sc.pos):
        start = sc.pos + 2
        end = start
        while end < len(sc.text) and sc.text[end] in "0123456789abcdefABCDEF":
            end += 1
        hexpart = sc.text[start:end]
        if len(hexpart) % 2 != 0:
            raise sc.fail("odd-length base16 byte string")
        sc.pos = end
        return bytes.fromhex(hexpart)
    if sc.text.startswith("true", sc.pos):
        sc.pos += 4
        return True
    if sc.text.startswith("false", sc.pos):
        sc.pos += 5
        return False
    if ch in "+-0123456789.":
        start = sc.pos
        end = start
        while end < len(sc.text) and sc.text[end] in _NUM_CHARS:
            end += 1
        token = sc.text[start:end]
        sc.pos = end
        if any(c in token for c in ".eE"):
            try:
                return float(token)
            except ValueError:
                raise sc.fail(f"bad decimal literal {token!r}") from None
        try:
            return int(token)
        except ValueError:
            raise sc.fail(f"bad integer literal {token!r}") from None
    raise sc.fail(f"unexpected character {ch!r}")


def parse_value(text: str):
    """Parse exactly one literal; the whole text must be consumed."""
    sc = _Scanner(text.strip())
    value = _scan_value(sc)
    if not sc.at_end():
        raise sc.fail("trailing content after value")
    return value


def _check_type(value: Any, semtype: str) -> None:
    if semtype == "int":
        ok = type(value) is int
    elif semtype == "float":
        ok = type(value) is float
    elif semtype == "bool":
        ok = type(value) is bool
    elif semtype == "string":
        ok = type(value) is str
    elif semtype == "bytes":
        ok = type(value) is bytes
    elif semtypes.is_array(semtype):
        elem = semtypes.element_type(semtype)
        ok = type(value) is list
        if ok:
            for item in value:
                _check_type(item, elem)
    else:
        raise VectorFormatError(f"cannot check against semantic type {semtype!r}")
    if not ok:
        raise VectorFormatError(
            f"literal {value!r} does not match semantic type {semtype!r}"
        )


def parse_case(line: str, signature: semtypes.Signature) -> list:
    """Parse one case line against a signature. Strict: no coercion."""
    sc = _Scanner(line.rstrip("\n"))
    values = []
    while not sc.at_end():
        values.append(_scan_value(sc))
    if len(values) != signature.arity():
        raise VectorFormatError(
            f"arity mismatch: {len(values)} literals for "
            f"{signature.arity()} parameters in {line!r}"
        )
    for value, param in zip(values, signature.params):
        _check_type(value, param.semtype)
    return values


# ---------------------------------------------------------------------------
# Output canonicalization


def canonicalize_output(text: str, returns: str) -> bytes:
    """Map a driver's printed result to the canonical comparison bytes.

    The driver prints its result as one wire-format literal. The literal is
    re-parsed, type-checked against the declared return type, and re-emitted
    canonically, which absorbs formatting dialects across languages.
    """
    stripped = text[:-1] if text.endswith("\n") else text
    stripped = stripped[:-1] if stripped.endswith("\r") else stripped
    value = parse_value(stripped)
    _check_type(value, returns)
    return canonical_text(value, returns).encode("utf-8")
