"""Pipeline configuration and its line-oriented key=value file format."""

from __future__ import annotations

from dataclasses import dataclass, asdict

from .errors import InvariantError


@dataclass(frozen=True)
class PipelineConfig:
    # Iteration ceiling for the native-code refinement loop.
    refinement_threshold: int = 20
    # Consecutive no-improvement iterations before test generation stops.
    coverage_stagnation_limit: int = 3
    # Paired transformation examples shown during the initial transform.
    few_shot_example_count: int = 3
    # Samples averaged per overhead-benchmark measurement.
    run_repeat_count: int = 5
    # Absolute cap on test-refinement rounds, defensive and configurable.
    max_test_iterations: int = 10
    # 1 or 2 reproduce the staged-prompt comparison; 3 is the real protocol.
    identification_rounds: int = 3
    # Per-case execution timeout for differential runs, seconds.
    case_timeout_s: float = 10.0
    backend_id: str = "replay"
    toolchain_id: str = "rust-cargo"
    tee_profile_id: str = "process"

    def validate(self) -> None:
        for name in (
            "refinement_threshold",
            "coverage_stagnation_limit",
            "few_shot_example_count",
            "run_repeat_count",
            "max_test_iterations",
        ):
            if getattr(self, name) < 1:
                raise InvariantError(f"config {name} must be >= 1")
        if self.identification_rounds not in (1, 2, 3):
            raise InvariantError("identification_rounds must be 1, 2 or 3")
        if self.case_timeout_s <= 0:
            raise InvariantError("case_timeout_s must be positive")


_INT_FIELDS = {
    "refinement_threshold",
    "coverage_stagnation_limit",
    "few_shot_example_count",
    "run_repeat_count",
    "max_test_iterations",
    "identification_rounds",
}
_FLOAT_FIELDS = {"case_timeout_s"}


def dump_config(config: PipelineConfig) -> str:
    lines = [f"{key}={value}" for key, value in sorted(asdict(config).items())]
    return "\n".join(lines) + "\n"


def load_config(text: str) -> PipelineConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvariantError(f"config line {lineno} is not key=value: {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _INT_FIELDS:
            values[key] = int(value)
        elif key in _FLOAT_FIELDS:
            values[key] = float(value)
        else:
            values[key] = value
    config = PipelineConfig(**values)
    config.validate()
    return config
