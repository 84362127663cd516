"""Prompt templates for every model-facing stage.

Placeholders are written <<name>> so code bodies with braces render
literally. Rendering is deterministic and fails listing any missing
bindings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import PromptBindingError

_PLACEHOLDER = re.compile(r"<<(\w+)>>")


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    text: str

    @property
    def required_bindings(self) -> frozenset[str]:
        return frozenset(_PLACEHOLDER.findall(self.text))

    def render(self, bindings: dict[str, str]) -> str:
        missing = sorted(self.required_bindings - set(bindings))
        if missing:
            raise PromptBindingError(self.template_id, missing)

        def sub(match: re.Match) -> str:
            return str(bindings[match.group(1)])

        return _PLACEHOLDER.sub(sub, self.text)


_TEMPLATES = [
    PromptTemplate(
        "identify-round-1",
        "Does this function utilize or implement any operations related to "
        "[cryptography, serialization]? Please respond with 'Yes'; otherwise, "
        "respond with 'No.' Specifically, cryptography includes "
        "[<<crypto_categories>>]; serialization includes "
        "[<<serialization_categories>>].\n\n<<code>>",
    ),
    PromptTemplate(
        "identify-round-2",
        "What type of operation does this function involve?",
    ),
    PromptTemplate(
        "identify-round-3",
        "List the statements involved in [<<categories>>].",
    ),
    PromptTemplate(
        "testgen-initial",
        "Generate a set of diverse test inputs that invoke this function "
        "with the goal of maximizing both line and branch coverage.\n\n"
        "<<code>>\n\n"
        "The function signature is <<signature>>. Reply with one test case "
        "per line inside a fenced code block, each line holding the "
        "arguments in order as typed literals: integers, decimals, true or "
        "false, \"quoted strings\", 0x-prefixed base16 byte strings, and "
        "bracketed arrays.",
    ),
    PromptTemplate(
        "testgen-refine",
        "The current test inputs reach <<line_pct>>% line coverage and "
        "<<branch_pct>>% branch coverage. These sites are still uncovered:\n"
        "<<uncovered>>\n\n"
        "Generate additional test inputs that reach the uncovered sites. "
        "Reply with one test case per line inside a fenced code block, in "
        "the same typed-literal format.",
    ),
    PromptTemplate(
        "transform-objective",
        "What objective does this function accomplish?\n\n<<code>>",
    ),
    PromptTemplate(
        "transform-initial",
        "Transform this code into Rust. For example, <<examples>>\n\n"
        "Now transform:\n\n<<code>>\n\n"
        "Reply with one fenced ```rust code block holding the complete "
        "function, followed by a line of the form "
        "Dependencies: [name = \"version\", ...] (an empty list if none).",
    ),
    PromptTemplate(
        "react-system",
        "You refine Rust code until it compiles and behaves identically to "
        "the original function. Every reply must contain exactly one "
        "thought and one action, in this exact format:\n"
        "Thought: <your reasoning>\n"
        "Action: <NAME>\n"
        "<payload>\n\n"
        "Actions:\n"
        "- ISSUES_SEARCH: payload is one compiler error code (e.g. E0308); "
        "returns its official description and an example fix.\n"
        "- CODE_MODIFICATION: payload is a fenced ```rust block with the "
        "complete replacement source.\n"
        "- DEPENDENCY_UPDATE: payload is a bracketed dependency list, e.g. "
        "[sha2 = \"0.11\", hex = \"0.4\"].\n"
        "- COMPILABILITY_CHECK: no payload; compiles the current source.\n"
        "- EQUIVALENCE_VALIDATION: no payload; runs the differential test "
        "suite against the original (requires a passing compile of the "
        "current source).",
    ),
    PromptTemplate(
        "react-task",
        "Implement this code using Rust with the same input type and return "
        "type <<code>>\n\n"
        "The native function must be named <<name>> and use the pinned "
        "interface mapping: <<abi>>.\n\n"
        "Initial check results:\n<<initial_report>>",
    ),
]

TEMPLATES = {t.template_id: t for t in _TEMPLATES}


def render_prompt(template_id: str, bindings: dict[str, str]) -> str:
    if template_id not in TEMPLATES:
        raise PromptBindingError(template_id, ["<unknown template>"])
    return TEMPLATES[template_id].render(bindings)
