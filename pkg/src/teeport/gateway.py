"""Chat-session abstraction over model backends.

Every downstream stage talks to a model through ask(); which backend sits
behind it decides whether that is a live HTTPS call, a scripted reply, or a
deterministic replay of a recorded transcript. Transcripts are one file per
session, one stanza per turn, each carrying role, a normalized prompt hash,
token counts, and the exact text, so replayed pipelines are byte-stable.

The live backend reads its credentials from the TEEPORT_API_KEY environment
variable (endpoint and model from TEEPORT_API_URL / TEEPORT_MODEL), posts
OpenAI-style chat-completion requests, and defaults to temperature 0, the
most deterministic setting the protocol offers.
"""

from __future__ import annotations

import enum
import hashlib
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    BackendUnreachableError,
    GatewayError,
    ReplayDivergenceError,
)
from .vectors import format_value, parse_value

DEFAULT_RETRY_LIMIT = 3


class Role(str, enum.Enum):
    SYSTEM = "SYSTEM"
    USER = "USER"
    ASSISTANT = "ASSISTANT"


def normalized_hash(text: str) -> str:
    """Whitespace-collapsed prompt hash used for replay matching."""
    collapsed = " ".join(text.split())
    return hashlib.sha256(collapsed.encode("utf-8")).hexdigest()[:16]


def estimate_tokens(text: str) -> int:
    return max(1, len(text) // 4)


@dataclass
class TranscriptTurn:
    index: int
    role: Role
    text: str
    prompt_tokens: int
    completion_tokens: int

    @property
    def norm_hash(self) -> str:
        return normalized_hash(self.text)


# ---------------------------------------------------------------------------
# Transcript store


class TranscriptStore:
    """One transcript file per session under a directory.

    Appends to distinct session files may run concurrently; a single
    session is written by exactly one conversation at a time.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, session_id: str) -> Path:
        safe = session_id.replace("/", "_")
        return self.directory / f"{safe}.transcript"

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def exists(self, session_id: str) -> bool:
        return self._path(session_id).exists()

    def append_turn(self, session_id: str, backend_id: str, turn: TranscriptTurn) -> None:
        path = self._path(session_id)
        with self._lock(session_id):
            fresh = not path.exists()
            with path.open("a", encoding="utf-8") as fh:
                if fresh:
                    fh.write(f"session: {session_id}\nbackend: {backend_id}\n")
                fh.write(
                    f"\nturn: {turn.index}\n"
                    f"role: {turn.role.value}\n"
                    f"hash: {turn.norm_hash}\n"
                    f"prompt-tokens: {turn.prompt_tokens}\n"
                    f"completion-tokens: {turn.completion_tokens}\n"
                    f"text: {format_value(turn.text, 'string')}\n"
                )

    def load(self, session_id: str) -> tuple[str, list[TranscriptTurn]]:
        path = self._path(session_id)
        if not path.exists():
            raise GatewayError(f"no transcript for session {session_id!r}")
        backend_id = ""
        turns: list[TranscriptTurn] = []
        stanza: dict[str, str] = {}

        def flush():
            if not stanza:
                return
            turns.append(
                TranscriptTurn(
                    index=int(stanza["turn"]),
                    role=Role(stanza["role"]),
                    text=parse_value(stanza["text"]),
                    prompt_tokens=int(stanza["prompt-tokens"]),
                    completion_tokens=int(stanza["completion-tokens"]),
                )
            )
            stanza.clear()

        for raw in path.read_text(encoding="utf-8").splitlines():
            if not raw.strip():
                flush()
                continue
            key, _, value = raw.partition(":")
            key = key.strip()
            value = value.strip()
            if key == "backend":
                backend_id = value
            elif key != "session":
                stanza[key] = value
        flush()
        return backend_id, turns

    def session_ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.transcript"))


# ---------------------------------------------------------------------------
# Session


@dataclass
class ChatSession:
    session_id: str
    backend: "Backend"
    system_text: str | None = None
    turns: list[tuple[Role, str]] = field(default_factory=list)
    ledger: list[tuple[int, int]] = field(default_factory=list)
    closed: bool = False

    def __post_init__(self):
        if self.system_text is not None:
            self.turns.append((Role.SYSTEM, self.system_text))

    @property
    def prompt_tokens(self) -> int:
        return sum(p for p, _ in self.ledger)

    @property
    def completion_tokens(self) -> int:
        return sum(c for _, c in self.ledger)


def ask(session: ChatSession, user_text: str) -> str:
    """Append a USER turn, obtain the ASSISTANT reply, update the ledger."""
    if session.closed:
        raise GatewayError(f"session {session.session_id} is closed")
    if session.turns and session.turns[-1][0] is Role.USER:
        raise GatewayError("turns must alternate USER/ASSISTANT")
    session.turns.append((Role.USER, user_text))
    try:
        reply = session.backend.complete(session, user_text)
    except Exception:
        session.turns.pop()
        raise
    session.turns.append((Role.ASSISTANT, reply.text))
    session.ledger.append((reply.prompt_tokens, reply.completion_tokens))
    return reply.text


def usage_report(session: ChatSession) -> tuple[int, int, int]:
    """(prompt tokens, completion tokens, turn count), from the ledger."""
    return (session.prompt_tokens, session.completion_tokens, len(session.turns))


@dataclass
class BackendReply:
    text: str
    prompt_tokens: int
    completion_tokens: int


class Backend:
    backend_id = "abstract"

    def open_session(self, session_id: str, system_text: str | None = None) -> ChatSession:
        session = ChatSession(session_id, self, system_text)
        self.on_open(session)
        return session

    def on_open(self, session: ChatSession) -> None:
        pass

    def complete(self, session: ChatSession, user_text: str) -> BackendReply:
        raise NotImplementedError


class ScriptedBackend(Backend):
    """Deterministic replies for tests and demos.

    The script is either a list of replies consumed in order (per session)
    or a callable (turn_pair_index, user_text, session_id) -> str.
    """

    backend_id = "scripted"

    def __init__(self, script):
        self.script = script
        self._cursors: dict[str, int] = {}

    def complete(self, session: ChatSession, user_text: str) -> BackendReply:
        cursor = self._cursors.get(session.session_id, 0)
        self._cursors[session.session_id] = cursor + 1
        if callable(self.script):
            text = self.script(cursor, user_text, session.session_id)
        else:
            if cursor >= len(self.script):
                raise GatewayError(
                    f"scripted backend exhausted at turn pair {cursor} "
                    f"for session {session.session_id!r}"
                )
            text = self.script[cursor]
        return BackendReply(text, estimate_tokens(user_text), estimate_tokens(text))


class LiveBackend(Backend):
    """OpenAI-style chat-completion endpoint over HTTPS.

    Transport failures are retried up to retry_limit times and surfaced as
    BackendUnreachableError after exhaustion. A custom transport callable
    may be injected for fault-injection tests.
    """

    backend_id = "live"

    def __init__(
        self,
        url: str | None = None,
        model: str | None = None,
        api_key_env: str = "TEEPORT_API_KEY",
        retry_limit: int = DEFAULT_RETRY_LIMIT,
        temperature: float = 0.0,
        transport=None,
    ):
        self.url = url or os.environ.get("TEEPORT_API_URL", "")
        self.model = model or os.environ.get("TEEPORT_MODEL", "")
        self.api_key_env = api_key_env
        self.retry_limit = retry_limit
        self.temperature = temperature
        self.transport = transport or self._http_transport

    def _http_transport(self, payload: dict) -> dict:
        import requests

        key = os.environ.get(self.api_key_env)
        if not key:
            raise BackendUnreachableError(
                f"no credentials: set {self.api_key_env} for the live backend"
            )
        response = requests.post(
            self.url,
            json=payload,
            headers={"Authorization": f"Bearer {key}"},
            timeout=120,
        )
        response.raise_for_status()
        return response.json()

    def complete(self, session: ChatSession, user_text: str) -> BackendReply:
        messages = [
            {"role": role.value.lower(), "content": text}
            for role, text in session.turns
        ]
        payload = {
            "model": self.model,
            "messages": messages,
            "temperature": self.temperature,
        }
        last_error: Exception | None = None
        for _ in range(self.retry_limit):
            try:
                data = self.transport(payload)
                text = data["choices"][0]["message"]["content"]
                usage = data.get("usage", {})
                return BackendReply(
                    text,
                    int(usage.get("prompt_tokens", estimate_tokens(user_text))),
                    int(usage.get("completion_tokens", estimate_tokens(text))),
                )
            except BackendUnreachableError:
                raise
            except Exception as exc:  # transport or shape failure
                last_error = exc
        raise BackendUnreachableError(
            f"live backend failed after {self.retry_limit} attempts: {last_error}"
        )


class RecordingBackend(Backend):
    """Wraps another backend and persists every turn pair."""

    def __init__(self, inner: Backend, store: TranscriptStore):
        self.inner = inner
        self.store = store
        self.backend_id = f"record+{inner.backend_id}"

    def on_open(self, session: ChatSession) -> None:
        if session.system_text is not None:
            self.store.append_turn(
                session.session_id,
                self.backend_id,
                TranscriptTurn(1, Role.SYSTEM, session.system_text, 0, 0),
            )

    def complete(self, session: ChatSession, user_text: str) -> BackendReply:
        reply = self.inner.complete(session, user_text)
        index = len(session.turns)  # USER turn already appended
        self.store.append_turn(
            session.session_id,
            self.backend_id,
            TranscriptTurn(index, Role.USER, user_text, reply.prompt_tokens, 0),
        )
        self.store.append_turn(
            session.session_id,
            self.backend_id,
            TranscriptTurn(index + 1, Role.ASSISTANT, reply.text, 0, reply.completion_tokens),
        )
        return reply


class ReplayBackend(Backend):
    """Replays recorded transcripts and fails loudly on divergence.

    Matching keys on the whitespace-collapsed hash of the user text; token
    counts come from the recorded ledger, never re-estimated.
    """

    backend_id = "replay"

    def __init__(self, store: TranscriptStore):
        self.store = store
        self._cursors: dict[str, list[TranscriptTurn]] = {}

    def on_open(self, session: ChatSession) -> None:
        _, turns = self.store.load(session.session_id)
        queue = list(turns)
        if session.system_text is not None:
            if not queue or queue[0].role is not Role.SYSTEM:
                raise ReplayDivergenceError(
                    f"session {session.session_id!r}: transcript has no SYSTEM turn",
                    turn_index=1,
                )
            recorded = queue.pop(0)
            if recorded.norm_hash != normalized_hash(session.system_text):
                raise ReplayDivergenceError(
                    f"session {session.session_id!r}: SYSTEM text diverges",
                    turn_index=recorded.index,
                )
        self._cursors[session.session_id] = queue

    def complete(self, session: ChatSession, user_text: str) -> BackendReply:
        queue = self._cursors.get(session.session_id)
        if queue is None:
            raise GatewayError("replay session was never opened")
        if len(queue) < 2:
            raise ReplayDivergenceError(
                f"session {session.session_id!r}: transcript exhausted",
                turn_index=len(session.turns),
            )
        recorded_user = queue.pop(0)
        if recorded_user.role is not Role.USER:
            raise ReplayDivergenceError(
                f"session {session.session_id!r}: expected USER at turn "
                f"{recorded_user.index}",
                turn_index=recorded_user.index,
            )
        if recorded_user.norm_hash != normalized_hash(user_text):
            raise ReplayDivergenceError(
                f"session {session.session_id!r}: prompt diverges from "
                f"transcript at turn {recorded_user.index}",
                turn_index=recorded_user.index,
            )
        recorded_reply = queue.pop(0)
        return BackendReply(
            recorded_reply.text,
            recorded_user.prompt_tokens,
            recorded_reply.completion_tokens,
        )


def make_backend(
    backend_id: str,
    transcripts_dir: str | Path | None = None,
    script=None,
) -> Backend:
    """Build a backend from its config id.

    Ids: "scripted", "live", "replay", "record+scripted", "record+live".
    """
    if backend_id == "scripted":
        return ScriptedBackend(script or [])
    if backend_id == "live":
        return LiveBackend()
    store = TranscriptStore(transcripts_dir) if transcripts_dir is not None else None
    if backend_id == "replay":
        if store is None:
            raise GatewayError("replay backend needs a transcripts directory")
        return ReplayBackend(store)
    if backend_id.startswith("record+"):
        if store is None:
            raise GatewayError("recording backend needs a transcripts directory")
        inner = make_backend(backend_id.split("+", 1)[1], transcripts_dir, script)
        return RecordingBackend(inner, store)
    raise GatewayError(f"unknown backend id {backend_id!r}")
