"""Coverage-guided test-input generation.

build_suite loops measure -> refine until both line and branch coverage hit
100% or no improvement is seen for coverage_stagnation_limit consecutive
iterations. Cases are only ever added, so coverage percentages are
non-decreasing across the recorded history. A defensive absolute cap
(max_test_iterations) cuts runaway loops and leaves the suite IN_PROGRESS.
"""

from __future__ import annotations

import json
import re
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import coverage_py, vectors
from .config import PipelineConfig
from .errors import CoverageError, DriverBuildError, InvariantError
from .drivers import write_driver
from .gateway import ChatSession, ask
from .prompts import render_prompt
from .records import FunctionRecord, register_kind
from .shims import NO_SHIM, ShimSpec


@dataclass(frozen=True)
class TestInput:
    case_id: int
    line: str  # canonical wire-format case


@dataclass
class CoverageReport:
    line_pct: float
    branch_pct: float
    uncovered: list[tuple[str, str]] = field(default_factory=list)  # (kind, location)
    case_errors: list[dict] = field(default_factory=list)

    def is_full(self) -> bool:
        return self.line_pct == 100.0 and self.branch_pct == 100.0


class SuiteStatus:
    FULL_COVERAGE = "FULL_COVERAGE"
    STAGNATED = "STAGNATED"
    IN_PROGRESS = "IN_PROGRESS"


@register_kind
@dataclass
class TestSuite:
    KIND = "test-suite"

    fqid: str
    cases: list[str]
    history: list[tuple[int, float, float]]  # (iteration, line pct, branch pct)
    status: str
    shim: str = "none"

    def validate(self) -> None:
        if not self.fqid:
            raise InvariantError("suite without fqid")
        if self.status not in (
            SuiteStatus.FULL_COVERAGE,
            SuiteStatus.STAGNATED,
            SuiteStatus.IN_PROGRESS,
        ):
            raise InvariantError(f"unknown suite status {self.status!r}")
        for (_, l1, b1), (_, l2, b2) in zip(self.history, self.history[1:]):
            if l2 < l1 or b2 < b1:
                raise InvariantError("coverage history must be non-decreasing")

    def to_doc(self) -> dict:
        return {
            "kind": self.KIND,
            "fqid": self.fqid,
            "cases": self.cases,
            "history": [list(entry) for entry in self.history],
            "status": self.status,
            "shim": self.shim,
        }

    @staticmethod
    def from_doc(doc: dict) -> "TestSuite":
        return TestSuite(
            fqid=doc["fqid"],
            cases=doc["cases"],
            history=[tuple(entry) for entry in doc["history"]],
            status=doc["status"],
            shim=doc.get("shim", "none"),
        )

    def inputs(self) -> list[TestInput]:
        return [TestInput(i, line) for i, line in enumerate(self.cases)]


def export_vector_file(suite: TestSuite, path: str | Path) -> None:
    Path(path).write_text("\n".join(suite.cases) + "\n", encoding="utf-8")


def import_vector_file(fqid: str, path: str | Path) -> TestSuite:
    lines = [
        line
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    return TestSuite(fqid=fqid, cases=lines, history=[], status=SuiteStatus.IN_PROGRESS)


# ---------------------------------------------------------------------------
# Coverage measurement (Python adapter)


def _format_location(record: FunctionRecord, line: int, label: str | None = None) -> str:
    base = f"{record.path}:{line}"
    return f"{base}:{label}" if label else base


def measure_coverage(
    record: FunctionRecord,
    cases: list[str],
    project_root: str | Path,
    scratch_dir: str | Path,
    shim: ShimSpec = NO_SHIM,
    timeout_s: float = 60.0,
) -> CoverageReport:
    """Run all cases through the batch driver and aggregate to the
    function's own body (the enclosing file's import-time lines are not
    part of the universe)."""
    if record.language != "python":
        raise CoverageError(
            f"no coverage adapter registered for language {record.language!r}"
        )
    source = (Path(project_root) / record.path).read_text(encoding="utf-8")
    sites = coverage_py.static_sites(source, record.qualname)

    scratch = Path(scratch_dir)
    scratch.mkdir(parents=True, exist_ok=True)
    driver = write_driver(record, project_root, scratch, "batch", shim)
    cases_path = scratch / "cases.vectors"
    cases_path.write_text("".join(line + "\n" for line in cases), encoding="utf-8")
    out_path = scratch / "coverage.json"

    proc = subprocess.run(
        [sys.executable, str(driver), str(cases_path), str(out_path)],
        capture_output=True,
        text=True,
        timeout=timeout_s,
    )
    if proc.returncode != 0:
        raise DriverBuildError(
            f"coverage driver failed for {record.fqid}: {proc.stderr.strip()[:500]}"
        )
    payload = json.loads(out_path.read_text(encoding="utf-8"))
    observation = coverage_py.observe(payload["events"], sites)

    total_lines = len(sites.body_lines)
    covered_lines = len(observation.executed_lines)
    line_pct = 100.0 * covered_lines / total_lines if total_lines else 100.0

    uncovered: list[tuple[str, str]] = []
    for line in sorted(sites.body_lines - observation.executed_lines):
        uncovered.append(("LINE", _format_location(record, line)))

    if sites.arcs:
        taken = observation.taken_arcs
        branch_pct = 100.0 * len(taken) / len(sites.arcs)
        for arc in sites.arcs:
            if (arc.test_line, arc.dest_line) not in taken:
                uncovered.append(
                    ("BRANCH", _format_location(record, arc.test_line, arc.label))
                )
    else:
        branch_pct = 100.0  # branchless functions are fully covered by definition

    return CoverageReport(
        line_pct=round(line_pct, 4),
        branch_pct=round(branch_pct, 4),
        uncovered=uncovered,
        case_errors=[c for c in payload["cases"] if c["error"] is not None],
    )


# ---------------------------------------------------------------------------
# Model-driven generation


_FENCE_RE = re.compile(r"```[a-zA-Z]*\n(.*?)```", re.S)


def parse_case_reply(
    text: str, record: FunctionRecord, existing: set[str]
) -> tuple[list[str], list[str]]:
    """Extract valid, novel case lines from a model reply.

    Malformed lines (arity or type mismatch) are dropped with warnings and
    never coerced; duplicates of existing cases are dropped silently.
    """
    blocks = _FENCE_RE.findall(text)
    raw_lines = []
    for block in blocks or [text]:
        raw_lines.extend(line for line in block.splitlines() if line.strip())
    cases = []
    warnings = []
    for line in raw_lines:
        try:
            values = vectors.parse_case(line, record.signature)
        except vectors.VectorFormatError as exc:
            warnings.append(f"dropped malformed case {line!r}: {exc}")
            continue
        canonical = vectors.format_case(values, record.signature)
        if canonical in existing or canonical in cases:
            continue
        cases.append(canonical)
    return cases, warnings


def _uncovered_text(report: CoverageReport) -> str:
    if not report.uncovered:
        return "(none)"
    return "\n".join(f"- {kind} {loc}" for kind, loc in report.uncovered)


def generate_initial_inputs(
    record: FunctionRecord, session: ChatSession, existing: set[str]
) -> tuple[list[str], list[str]]:
    prompt = render_prompt(
        "testgen-initial",
        {"code": record.body, "signature": record.signature.render()},
    )
    return parse_case_reply(ask(session, prompt), record, existing)


def refine_inputs(
    record: FunctionRecord,
    suite: TestSuite,
    report: CoverageReport,
    session: ChatSession,
) -> tuple[list[str], list[str]]:
    """Feed the coverage report back and parse the new cases."""
    if report.is_full():
        raise InvariantError("refine_inputs requires an incomplete report")
    prompt = render_prompt(
        "testgen-refine",
        {
            "line_pct": f"{report.line_pct:g}",
            "branch_pct": f"{report.branch_pct:g}",
            "uncovered": _uncovered_text(report),
        },
    )
    return parse_case_reply(ask(session, prompt), record, set(suite.cases))


def build_suite(
    record: FunctionRecord,
    session: ChatSession,
    config: PipelineConfig,
    project_root: str | Path,
    scratch_dir: str | Path,
    shim: ShimSpec = NO_SHIM,
) -> TestSuite:
    """Measure/refine loop ending at FULL_COVERAGE or STAGNATED."""
    suite = TestSuite(
        fqid=record.fqid, cases=[], history=[], status=SuiteStatus.IN_PROGRESS,
        shim=shim.kind,
    )
    cases, _ = generate_initial_inputs(record, session, set())
    suite.cases.extend(cases)

    iteration = 1
    report = measure_coverage(
        record, suite.cases, project_root, scratch_dir, shim, config.case_timeout_s * 6
    )
    suite.history.append((iteration, report.line_pct, report.branch_pct))

    stagnant = 0
    while not report.is_full():
        if stagnant >= config.coverage_stagnation_limit:
            suite.status = SuiteStatus.STAGNATED
            suite.validate()
            return suite
        if iteration >= config.max_test_iterations:
            suite.status = SuiteStatus.IN_PROGRESS
            suite.validate()
            return suite
        new_cases, _ = refine_inputs(record, suite, report, session)
        suite.cases.extend(new_cases)
        iteration += 1
        previous = (report.line_pct, report.branch_pct)
        report = measure_coverage(
            record, suite.cases, project_root, scratch_dir, shim,
            config.case_timeout_s * 6,
        )
        suite.history.append((iteration, report.line_pct, report.branch_pct))
        improved = report.line_pct > previous[0] or report.branch_pct > previous[1]
        stagnant = 0 if improved else stagnant + 1

    suite.status = SuiteStatus.FULL_COVERAGE
    suite.validate()
    return suite
