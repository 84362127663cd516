"""Core domain records shared by every pipeline stage.

Each record type knows how to turn itself into a plain JSON-compatible
document and back; the workspace persists those documents. Documents are
self-describing through their "kind" field, and every kind registers itself
in KIND_REGISTRY so the workspace can round-trip values without knowing the
stages they belong to.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

from .errors import InvariantError
from .semtypes import Signature, is_basic

# Language registry: two managed source languages and one native target.
MANAGED_LANGUAGES = ("python", "java")
NATIVE_TARGET = "rust"
LANGUAGES = MANAGED_LANGUAGES + (NATIVE_TARGET,)


def validate_language(language: str) -> str:
    if not language or language != language.lower() or language not in LANGUAGES:
        raise InvariantError(f"unknown language id: {language!r}")
    return language


class CallKind(str, enum.Enum):
    USER_DEFINED = "USER_DEFINED"
    STANDARD_LIBRARY = "STANDARD_LIBRARY"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class CallSite:
    callee_symbol: str
    kind: CallKind
    line: int

    def to_doc(self) -> dict:
        return {"callee": self.callee_symbol, "kind": self.kind.value, "line": self.line}

    @staticmethod
    def from_doc(doc: dict) -> "CallSite":
        return CallSite(doc["callee"], CallKind(doc["kind"]), doc["line"])


def signature_hash(signature: Signature) -> str:
    return hashlib.sha256(signature.render().encode("utf-8")).hexdigest()[:8]


def make_fqid(path: str, qualname: str, signature: Signature) -> str:
    return f"{path}::{qualname}::{signature_hash(signature)}"


@dataclass
class FunctionRecord:
    """One parsed function or method, the unit the whole pipeline works on."""

    KIND = "function-record"

    fqid: str
    language: str
    path: str
    qualname: str
    signature: Signature
    body: str
    span: tuple[int, int]
    call_sites: list[CallSite] = field(default_factory=list)
    # Methods qualify only when they never touch instance state; such
    # methods are invoked with a placeholder receiver by generated drivers.
    invoke_static: bool = False

    @property
    def name(self) -> str:
        return self.qualname.rsplit(".", 1)[-1]

    def validate(self) -> None:
        if not self.fqid:
            raise InvariantError("function record has an empty fqid")
        validate_language(self.language)
        start, end = self.span
        if start < 1 or end < start:
            raise InvariantError(f"empty or inverted span {self.span} for {self.fqid}")
        for p in self.signature.params:
            if p.semtype != "unknown" and not is_basic(p.semtype):
                raise InvariantError(f"bad semantic type {p.semtype!r} in {self.fqid}")

    def to_doc(self) -> dict:
        return {
            "kind": self.KIND,
            "fqid": self.fqid,
            "language": self.language,
            "path": self.path,
            "qualname": self.qualname,
            "signature": self.signature.render(),
            "body": self.body,
            "span": list(self.span),
            "callSites": [c.to_doc() for c in self.call_sites],
            "invokeStatic": self.invoke_static,
        }

    @staticmethod
    def from_doc(doc: dict) -> "FunctionRecord":
        return FunctionRecord(
            fqid=doc["fqid"],
            language=doc["language"],
            path=doc["path"],
            qualname=doc["qualname"],
            signature=Signature.parse(doc["signature"]),
            body=doc["body"],
            span=(doc["span"][0], doc["span"][1]),
            call_sites=[CallSite.from_doc(c) for c in doc["callSites"]],
            invoke_static=doc.get("invokeStatic", False),
        )


class FailureTag(str, enum.Enum):
    """Manual post-mortem labels for non-equivalent outcomes."""

    SOPHISTICATED_CRYPTO = "SOPHISTICATED_CRYPTO"
    SHIFT_OPERATIONS = "SHIFT_OPERATIONS"
    MISSING_FLAG = "MISSING_FLAG"
    FUNCTIONALITY_CHANGE = "FUNCTIONALITY_CHANGE"
    OTHER = "OTHER"


@dataclass
class FailureAnnotation:
    """A human-assigned FailureTag for one function; never auto-inferred."""

    KIND = "failure-annotation"

    fqid: str
    tag: FailureTag
    note: str = ""

    def validate(self) -> None:
        if not self.fqid:
            raise InvariantError("failure annotation without fqid")

    def to_doc(self) -> dict:
        return {"kind": self.KIND, "fqid": self.fqid, "tag": self.tag.value, "note": self.note}

    @staticmethod
    def from_doc(doc: dict) -> "FailureAnnotation":
        return FailureAnnotation(doc["fqid"], FailureTag(doc["tag"]), doc.get("note", ""))


# kind string -> record class; stage modules append their own kinds on import.
KIND_REGISTRY: dict[str, type] = {
    FunctionRecord.KIND: FunctionRecord,
    FailureAnnotation.KIND: FailureAnnotation,
}


def register_kind(cls):
    """Class decorator for record types defined in stage modules."""
    KIND_REGISTRY[cls.KIND] = cls
    return cls


def record_from_doc(doc: dict):
    kind = doc.get("kind")
    cls = KIND_REGISTRY.get(kind)
    if cls is None:
        raise InvariantError(f"unknown record kind {kind!r}")
    return cls.from_doc(doc)
