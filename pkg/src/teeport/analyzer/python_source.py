"""Grammar adapter for Python sources, built on the stdlib ast module."""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from pathlib import Path

from ..semtypes import Param, Signature, array_of

# Names that resolve to the language runtime rather than project code.
BUILTIN_CALLABLES = {
    "abs", "all", "any", "bool", "bytearray", "bytes", "chr", "dict",
    "divmod", "enumerate", "float", "format", "frozenset", "getattr",
    "hasattr", "hash", "int", "isinstance", "issubclass", "iter", "len",
    "list", "map", "max", "min", "next", "ord", "pow", "print", "range",
    "repr", "reversed", "round", "set", "sorted", "str", "sum", "tuple",
    "zip", "open", "ValueError", "TypeError", "KeyError", "IndexError",
    "RuntimeError", "Exception", "StopIteration", "super",
}

STDLIB_MODULES = {
    "base64", "binascii", "collections", "functools", "hashlib", "hmac",
    "itertools", "json", "math", "os", "pickle", "random", "re", "secrets",
    "string", "struct", "sys", "time", "urllib", "uuid", "zlib",
}

_ANNOTATION_MAP = {
    "int": "int",
    "float": "float",
    "bool": "bool",
    "str": "string",
    "bytes": "bytes",
}


@dataclass
class RawCall:
    symbol: str
    line: int


@dataclass
class RawFunction:
    qualname: str
    signature: Signature
    body: str
    span: tuple[int, int]
    calls: list[RawCall]
    invoke_static: bool = False


@dataclass
class FileScan:
    rel_path: str
    declared: list[str] = field(default_factory=list)  # qualified names
    functions: list[RawFunction] = field(default_factory=list)
    error: str | None = None


def _semtype_from_annotation(node: ast.expr | None) -> str:
    if node is None:
        return "unknown"
    if isinstance(node, ast.Name):
        return _ANNOTATION_MAP.get(node.id, "unknown")
    if isinstance(node, ast.Subscript):
        base = node.value
        if isinstance(base, ast.Name) and base.id in ("list", "List"):
            elem = _semtype_from_annotation(node.slice)
            if elem in _ANNOTATION_MAP.values():
                return array_of(elem)
    return "unknown"


def _call_symbol(func: ast.expr) -> str:
    if isinstance(func, ast.Name):
        return func.id
    if isinstance(func, ast.Attribute):
        base = _receiver_text(func.value)
        return f"{base}.{func.attr}"
    return "<dynamic>"


def _receiver_text(node: ast.expr) -> str:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Attribute):
        return f"{_receiver_text(node.value)}.{node.attr}"
    return "<expr>"


def _collect_calls(stmts: list[ast.stmt]) -> list[RawCall]:
    calls = []
    for stmt in stmts:
        for node in ast.walk(stmt):
            if isinstance(node, ast.Call):
                calls.append(RawCall(_call_symbol(node.func), node.lineno))
    return calls


def _uses_receiver(stmts: list[ast.stmt], name: str) -> bool:
    for stmt in stmts:
        for node in ast.walk(stmt):
            if isinstance(node, ast.Name) and node.id == name:
                return True
    return False


def _is_staticmethod(node: ast.FunctionDef) -> bool:
    return any(
        isinstance(d, ast.Name) and d.id == "staticmethod" for d in node.decorator_list
    )


def _function_source(lines: list[str], node: ast.FunctionDef) -> str:
    return "\n".join(lines[node.lineno - 1 : node.end_lineno])


def _scan_function(
    node: ast.FunctionDef, qualname: str, lines: list[str], in_class: bool
) -> RawFunction:
    params = []
    invoke_static = False
    args = list(node.args.args)
    if in_class and not _is_staticmethod(node) and args:
        receiver = args[0].arg
        if receiver in ("self", "cls"):
            if _uses_receiver(node.body, receiver):
                # Reading instance state: keep the receiver as an
                # unknown-typed parameter, which disqualifies leaf status.
                params.append(Param(receiver, "unknown"))
            else:
                invoke_static = True
            args = args[1:]
    for arg in args:
        params.append(Param(arg.arg, _semtype_from_annotation(arg.annotation)))
    signature = Signature(tuple(params), _semtype_from_annotation(node.returns))
    return RawFunction(
        qualname=qualname,
        signature=signature,
        body=_function_source(lines, node),
        span=(node.lineno, node.end_lineno),
        calls=_collect_calls(node.body),
        invoke_static=invoke_static,
    )


def scan_file(path: Path, rel_path: str) -> FileScan:
    scan = FileScan(rel_path=rel_path)
    try:
        source = path.read_text(encoding="utf-8")
        tree = ast.parse(source, filename=str(path))
    except (SyntaxError, UnicodeDecodeError) as exc:
        scan.error = f"{rel_path}: {exc.msg if hasattr(exc, 'msg') else exc}"
        return scan
    lines = source.splitlines()

    def visit(body, prefix: str, in_class: bool):
        for node in body:
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                qualname = f"{prefix}{node.name}"
                scan.declared.append(qualname)
                if isinstance(node, ast.FunctionDef):
                    scan.functions.append(
                        _scan_function(node, qualname, lines, in_class)
                    )
                    # Nested declarations still count for call resolution.
                    visit_nested_only(node.body, f"{qualname}.")
            elif isinstance(node, ast.ClassDef):
                visit(node.body, f"{node.name}.", in_class=True)

    def visit_nested_only(body, prefix: str):
        for node in body:
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                scan.declared.append(f"{prefix}{node.name}")
                visit_nested_only(node.body, f"{prefix}{node.name}.")
            elif isinstance(node, ast.ClassDef):
                visit_nested_only(node.body, f"{prefix}{node.name}.")

    visit(tree.body, "", in_class=False)
    return scan


def is_runtime_symbol(symbol: str) -> bool:
    """True for builtin callables and stdlib-module calls."""
    if "." not in symbol:
        return symbol in BUILTIN_CALLABLES
    return symbol.split(".", 1)[0] in STDLIB_MODULES
