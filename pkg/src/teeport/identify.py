"""Three-round sensitivity classification with self-correction.

Round 1 asks for a bare Yes/No; only on Yes does round 2 ask for the
operation categories and round 3 for the evidence statements. At rounds 2
and 3 the model may retract with the fixed phrase "Sorry, the previous
response is incorrect.", which flips the verdict to NON_SENSITIVE. Evidence
statements that are not verbatim substrings of the function body are
dropped with a warning; a category losing all its evidence is dropped, and
a verdict losing all categories flips to NON_SENSITIVE.

The staged protocol is the real classifier. identification_rounds of 1 or 2
exist solely to reproduce staged-prompt comparisons; a round-1-only
SENSITIVE verdict necessarily has no categories and is only meaningful for
detection metrics.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

from .errors import ClassificationError, InvariantError
from .gateway import Backend, ask
from .prompts import render_prompt
from .records import FunctionRecord, register_kind

RETRACTION_PREFIX = "sorry, the previous response"


class SensitivityCategory(str, enum.Enum):
    ENCRYPTION = "Encryption"
    DECRYPTION = "Decryption"
    SIGNATURE = "Signature"
    VERIFICATION = "Verification"
    HASH = "Hash"
    SEED_GENERATION = "Seed Generation"
    RANDOM_NUMBER_GENERATION = "Random Number Generation"
    SERIALIZATION = "Serialization"
    DESERIALIZATION = "Deserialization"


CRYPTO_CATEGORIES = [
    SensitivityCategory.ENCRYPTION,
    SensitivityCategory.DECRYPTION,
    SensitivityCategory.SIGNATURE,
    SensitivityCategory.VERIFICATION,
    SensitivityCategory.HASH,
    SensitivityCategory.SEED_GENERATION,
    SensitivityCategory.RANDOM_NUMBER_GENERATION,
]
SERIALIZATION_CATEGORIES = [
    SensitivityCategory.SERIALIZATION,
    SensitivityCategory.DESERIALIZATION,
]


def _category_from_text(text: str) -> SensitivityCategory | None:
    needle = " ".join(text.replace("_", " ").split()).lower()
    for category in SensitivityCategory:
        if category.value.lower() == needle:
            return category
    return None


class Label(str, enum.Enum):
    SENSITIVE = "SENSITIVE"
    NON_SENSITIVE = "NON_SENSITIVE"


@register_kind
@dataclass
class SensitivityVerdict:
    KIND = "sensitivity-verdict"

    fqid: str
    label: Label
    categories: list[SensitivityCategory]
    evidence: dict[str, list[str]]  # category value -> verbatim statements
    transcript_id: str
    retracted_at_round: int | None = None
    protocol_rounds: int = 3
    warnings: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not self.fqid:
            raise InvariantError("verdict without fqid")
        if self.retracted_at_round not in (None, 2, 3):
            raise InvariantError("retraction can only happen at round 2 or 3")
        if self.label is Label.NON_SENSITIVE and self.categories:
            raise InvariantError("NON_SENSITIVE verdicts carry no categories")
        if (
            self.label is Label.SENSITIVE
            and self.protocol_rounds >= 2
            and not self.categories
        ):
            raise InvariantError("SENSITIVE verdicts need at least one category")

    def to_doc(self) -> dict:
        return {
            "kind": self.KIND,
            "fqid": self.fqid,
            "label": self.label.value,
            "categories": [c.value for c in self.categories],
            "evidence": self.evidence,
            "transcriptId": self.transcript_id,
            "retractedAtRound": self.retracted_at_round,
            "protocolRounds": self.protocol_rounds,
            "warnings": self.warnings,
        }

    @staticmethod
    def from_doc(doc: dict) -> "SensitivityVerdict":
        return SensitivityVerdict(
            fqid=doc["fqid"],
            label=Label(doc["label"]),
            categories=[SensitivityCategory(c) for c in doc["categories"]],
            evidence=doc["evidence"],
            transcript_id=doc["transcriptId"],
            retracted_at_round=doc["retractedAtRound"],
            protocol_rounds=doc.get("protocolRounds", 3),
            warnings=doc.get("warnings", []),
        )


# ---------------------------------------------------------------------------
# Response parsing


class Round1Reply(str, enum.Enum):
    YES = "YES"
    NO = "NO"
    RETRACT = "RETRACT"
    UNPARSEABLE = "UNPARSEABLE"


RETRACT = "RETRACT"


def _is_retraction(text: str) -> bool:
    return text.strip().lower().startswith(RETRACTION_PREFIX)


def _split_top_level(text: str) -> list[str]:
    """Split on commas outside brackets, parens, and quotes."""
    parts = []
    depth = 0
    quote = ""
    current = []
    for ch in text:
        if quote:
            current.append(ch)
            if ch == quote:
                quote = ""
            continue
        if ch in "\"'":
            quote = ch
            current.append(ch)
        elif ch in "([{":
            depth += 1
            current.append(ch)
        elif ch in ")]}":
            depth = max(0, depth - 1)
            current.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_round_response(round_number: int, text: str):
    """Structured reply per round; UNPARSEABLE is a value, never an error.

    Round 1 -> Round1Reply; round 2 -> (categories, warnings) or RETRACT;
    round 3 -> (category -> statements, warnings) or RETRACT.
    """
    if round_number == 1:
        if _is_retraction(text):
            return Round1Reply.RETRACT
        head = text.strip().split(None, 1)
        token = head[0].strip(".,!:;'\"").lower() if head else ""
        if token == "yes":
            return Round1Reply.YES
        if token == "no":
            return Round1Reply.NO
        return Round1Reply.UNPARSEABLE

    if round_number == 2:
        if _is_retraction(text):
            return RETRACT
        inner = text.strip()
        if "[" in inner and "]" in inner:
            inner = inner[inner.index("[") + 1 : inner.rindex("]")]
        categories = []
        warnings = []
        for chunk in _split_top_level(inner):
            category = _category_from_text(chunk)
            if category is None:
                warnings.append(f"unknown category {chunk!r} ignored")
            elif category not in categories:
                categories.append(category)
        return categories, warnings

    if round_number == 3:
        if _is_retraction(text):
            return RETRACT
        statements: dict[str, list[str]] = {}
        warnings: list[str] = []
        for name, block in _find_category_blocks(text):
            category = _category_from_text(name)
            if category is None:
                warnings.append(f"unknown category {name!r} ignored")
                continue
            items = [s.strip().strip("`") for s in _split_top_level(block)]
            statements.setdefault(category.value, []).extend(
                s for s in items if s
            )
        return statements, warnings

    raise ValueError(f"no round {round_number} in the protocol")


def _find_category_blocks(text: str):
    """Yield (category name, bracketed block) pairs from a round-3 reply.

    The expected shape is "[Name: [stmt, ...], Other Name: [stmt], ...]";
    blocks are skipped over wholesale, so colons and brackets inside the
    statements themselves do not derail the scan.
    """
    pos = 0
    while True:
        colon = text.find(":", pos)
        if colon == -1:
            return
        open_bracket = text.find("[", colon)
        if open_bracket == -1:
            return
        if text[colon + 1 : open_bracket].strip():
            pos = colon + 1  # a colon inside prose, not a "Name: [" header
            continue
        name = text[:colon].rsplit("[", 1)[-1].rsplit(",", 1)[-1].strip()
        depth = 0
        end = None
        for j in range(open_bracket, len(text)):
            if text[j] == "[":
                depth += 1
            elif text[j] == "]":
                depth -= 1
                if depth == 0:
                    end = j
                    break
        if end is None:
            return
        yield name, text[open_bracket + 1 : end]
        pos = end + 1


# ---------------------------------------------------------------------------
# Classification protocol


def session_id_for(record: FunctionRecord, stage: str = "identify") -> str:
    return f"{stage}-{hashlib.sha256(record.fqid.encode()).hexdigest()[:12]}"


def _round1_prompt(record: FunctionRecord) -> str:
    return render_prompt(
        "identify-round-1",
        {
            "crypto_categories": ", ".join(c.value for c in CRYPTO_CATEGORIES),
            "serialization_categories": ", ".join(
                c.value for c in SERIALIZATION_CATEGORIES
            ),
            "code": record.body,
        },
    )


def classify_function(
    record: FunctionRecord, session, rounds: int = 3
) -> SensitivityVerdict:
    """Run the staged protocol over one leaf function."""
    warnings: list[str] = []

    def non_sensitive(retracted: int | None = None) -> SensitivityVerdict:
        verdict = SensitivityVerdict(
            fqid=record.fqid,
            label=Label.NON_SENSITIVE,
            categories=[],
            evidence={},
            transcript_id=session.session_id,
            retracted_at_round=retracted,
            protocol_rounds=rounds,
            warnings=warnings,
        )
        verdict.validate()
        return verdict

    reply1 = parse_round_response(1, ask(session, _round1_prompt(record)))
    if reply1 is Round1Reply.UNPARSEABLE or reply1 is Round1Reply.RETRACT:
        raise ClassificationError(
            f"{record.fqid}: round-1 reply is neither yes nor no"
        )
    if reply1 is Round1Reply.NO:
        return non_sensitive()
    if rounds == 1:
        verdict = SensitivityVerdict(
            fqid=record.fqid,
            label=Label.SENSITIVE,
            categories=[],
            evidence={},
            transcript_id=session.session_id,
            protocol_rounds=1,
            warnings=warnings,
        )
        verdict.validate()
        return verdict

    reply2 = parse_round_response(2, ask(session, render_prompt("identify-round-2", {})))
    if reply2 == RETRACT:
        return non_sensitive(retracted=2)
    categories, category_warnings = reply2
    warnings.extend(category_warnings)
    if not categories:
        warnings.append("round 2 produced no recognizable category")
        return non_sensitive()
    if rounds == 2:
        verdict = SensitivityVerdict(
            fqid=record.fqid,
            label=Label.SENSITIVE,
            categories=categories,
            evidence={},
            transcript_id=session.session_id,
            protocol_rounds=2,
            warnings=warnings,
        )
        verdict.validate()
        return verdict

    prompt3 = render_prompt(
        "identify-round-3", {"categories": ", ".join(c.value for c in categories)}
    )
    reply3 = parse_round_response(3, ask(session, prompt3))
    if reply3 == RETRACT:
        return non_sensitive(retracted=3)
    raw_evidence, evidence_warnings = reply3
    warnings.extend(evidence_warnings)

    evidence: dict[str, list[str]] = {}
    kept: list[SensitivityCategory] = []
    for category in categories:
        statements = raw_evidence.get(category.value, [])
        sound = []
        for statement in statements:
            if statement in record.body:
                sound.append(statement)
            else:
                warnings.append(
                    f"evidence for {category.value} not found verbatim: "
                    f"{statement!r}"
                )
        if sound:
            evidence[category.value] = sound
            kept.append(category)
        else:
            warnings.append(f"category {category.value} dropped: no surviving evidence")
    for extra in set(raw_evidence) - {c.value for c in categories}:
        warnings.append(f"round 3 listed unrequested category {extra!r}; ignored")

    if not kept:
        return non_sensitive()
    verdict = SensitivityVerdict(
        fqid=record.fqid,
        label=Label.SENSITIVE,
        categories=kept,
        evidence=evidence,
        transcript_id=session.session_id,
        protocol_rounds=3,
        warnings=warnings,
    )
    verdict.validate()
    return verdict


@dataclass
class BatchSummary:
    sensitive: int = 0
    non_sensitive: int = 0
    unresolved: int = 0


def classify_batch(
    records: list[FunctionRecord],
    backend: Backend,
    rounds: int = 3,
) -> tuple[list[SensitivityVerdict], BatchSummary, dict[str, str]]:
    """One fresh session per function; per-function failures never abort.

    Returns (verdicts, summary, unresolved) where unresolved maps fqid to
    the error text for functions needing manual triage.
    """
    verdicts = []
    summary = BatchSummary()
    unresolved: dict[str, str] = {}
    for record in records:
        session = backend.open_session(session_id_for(record))
        try:
            verdict = classify_function(record, session, rounds)
        except Exception as exc:
            unresolved[record.fqid] = str(exc)
            summary.unresolved += 1
            continue
        verdicts.append(verdict)
        if verdict.label is Label.SENSITIVE:
            summary.sensitive += 1
        else:
            summary.non_sensitive += 1
    return verdicts, summary, unresolved
