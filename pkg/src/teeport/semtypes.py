"""Semantic-type vocabulary for function signatures.

Cross-language interaction restricts argument and return types to a small
closed set: scalars (int, float, bool), strings, byte strings, and flat
arrays of those. Everything that does not fit maps to "unknown", which
disqualifies a function from leaf status downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

SCALARS = ("int", "float", "bool", "string", "bytes")
UNKNOWN = "unknown"

ARRAY_PREFIX = "array-of-"


def array_of(element: str) -> str:
    return ARRAY_PREFIX + element


def is_array(semtype: str) -> bool:
    return semtype.startswith(ARRAY_PREFIX)


def element_type(semtype: str) -> str:
    if not is_array(semtype):
        raise ValueError(f"not an array type: {semtype}")
    return semtype[len(ARRAY_PREFIX):]


def is_basic(semtype: str) -> bool:
    """True for every member of the closed vocabulary except "unknown"."""
    if semtype in SCALARS:
        return True
    if is_array(semtype):
        return element_type(semtype) in SCALARS
    return False


def validate(semtype: str) -> str:
    if semtype == UNKNOWN or is_basic(semtype):
        return semtype
    raise ValueError(f"not a member of the semantic-type vocabulary: {semtype!r}")


@dataclass(frozen=True)
class Param:
    name: str
    semtype: str


@dataclass(frozen=True)
class Signature:
    """Parameter list plus return type, in semantic-type terms."""

    params: tuple[Param, ...]
    returns: str

    def arity(self) -> int:
        return len(self.params)

    def param_types(self) -> tuple[str, ...]:
        return tuple(p.semtype for p in self.params)

    def is_basic(self) -> bool:
        return all(is_basic(p.semtype) for p in self.params) and is_basic(self.returns)

    def render(self) -> str:
        inner = ", ".join(f"{p.name}: {p.semtype}" for p in self.params)
        return f"({inner}) -> {self.returns}"

    @staticmethod
    def parse(text: str) -> "Signature":
        """Inverse of render(); used by record serialization."""
        text = text.strip()
        if not text.startswith("(") or ") -> " not in text:
            raise ValueError(f"malformed signature text: {text!r}")
        inside, _, ret = text.partition(") -> ")
        inside = inside[1:]
        params = []
        if inside.strip():
            for chunk in inside.split(","):
                name, _, semtype = chunk.partition(":")
                if not semtype:
                    raise ValueError(f"malformed parameter: {chunk!r}")
                params.append(Param(name.strip(), validate(semtype.strip())))
        return Signature(tuple(params), validate(ret.strip()))
