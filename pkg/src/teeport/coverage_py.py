"""Line and branch coverage for Python functions via stdlib tracing.

Static universes come from the function's AST: every statement line in the
body is a line site, and every if/while/for header contributes two branch
arcs (taken / not taken, where "not taken" for loops is the exit arc).
Execution events come from a sys.settrace hook inside the generated driver
subprocess; consecutive line events observed from a branch header resolve
which arc ran. Granularity is the statement: single-line suites
("if x: return y") and boolean short-circuit operands are not tracked, and
the bundled corpus is written one statement per line accordingly.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path

from .errors import CoverageError

EXIT = -1  # synthetic event appended when a frame in the target file returns


@dataclass(frozen=True)
class BranchArc:
    test_line: int
    dest_line: int  # EXIT for fall-off-function arcs
    label: str  # "true" | "false" | "enter" | "exit"


@dataclass
class FunctionSites:
    body_lines: set[int]
    arcs: list[BranchArc]

    @property
    def branch_headers(self) -> set[int]:
        return {arc.test_line for arc in self.arcs}


def _find_function(tree: ast.Module, qualname: str) -> ast.FunctionDef:
    parts = qualname.split(".")
    scope: list = tree.body
    node = None
    for i, part in enumerate(parts):
        node = None
        for candidate in scope:
            if isinstance(candidate, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
                if candidate.name == part:
                    node = candidate
                    break
        if node is None:
            raise CoverageError(f"no definition for {qualname!r}")
        scope = node.body if i < len(parts) - 1 else None
    if not isinstance(node, ast.FunctionDef):
        raise CoverageError(f"{qualname!r} is not a plain function")
    return node


def static_sites(source: str, qualname: str) -> FunctionSites:
    tree = ast.parse(source)
    func = _find_function(tree, qualname)
    body_lines: set[int] = set()
    arcs: list[BranchArc] = []

    def first_line(stmts: list[ast.stmt]) -> int:
        return stmts[0].lineno

    def visit_block(stmts: list[ast.stmt], after: int) -> None:
        for i, stmt in enumerate(stmts):
            body_lines.add(stmt.lineno)
            next_line = stmts[i + 1].lineno if i + 1 < len(stmts) else after
            if isinstance(stmt, ast.If):
                arcs.append(BranchArc(stmt.lineno, first_line(stmt.body), "true"))
                false_dest = first_line(stmt.orelse) if stmt.orelse else next_line
                arcs.append(BranchArc(stmt.lineno, false_dest, "false"))
                visit_block(stmt.body, next_line)
                if stmt.orelse:
                    visit_block(stmt.orelse, next_line)
            elif isinstance(stmt, (ast.While, ast.For)):
                arcs.append(BranchArc(stmt.lineno, first_line(stmt.body), "enter"))
                arcs.append(BranchArc(stmt.lineno, next_line, "exit"))
                # Loop bodies continue back at the header.
                visit_block(stmt.body, stmt.lineno)
            elif isinstance(stmt, ast.With):
                visit_block(stmt.body, next_line)
            elif isinstance(stmt, ast.Try):
                visit_block(stmt.body, next_line)
                for handler in stmt.handlers:
                    visit_block(handler.body, next_line)

    visit_block(func.body, EXIT)
    return FunctionSites(body_lines, arcs)


@dataclass
class ArcObservation:
    executed_lines: set[int]
    taken_arcs: set[tuple[int, int]]


def observe(events: list[int], sites: FunctionSites) -> ArcObservation:
    """Resolve executed lines and taken arcs from a line-event stream."""
    headers = sites.branch_headers
    executed = set(e for e in events if e in sites.body_lines)
    taken: set[tuple[int, int]] = set()
    known = {(arc.test_line, arc.dest_line) for arc in sites.arcs}
    for a, b in zip(events, events[1:]):
        if a in headers and (a, b) in known:
            taken.add((a, b))
    return ArcObservation(executed, taken)
