"""Determinism shims for randomized functions.

Differential comparison of randomized code only works when both sides draw
the same randomness. The shim replaces byte-oriented entropy sources with a
predefined stream, identical on the managed side (patched os.urandom and
friends) and the native side (the toolchain's runtime_rand module in mock
mode): byte i of the stream is (131*i + 7) mod 256.

Integer- and float-valued RNG APIs (random.randint, random.random, ...)
have no cross-language predefined-value mapping here; functions calling
them are flagged as randomness users but cannot be shimmed, which surfaces
as UNSHIMMABLE_RANDOMNESS.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnshimmableRandomnessError
from .records import FunctionRecord

# APIs the shim can redirect to the predefined byte stream.
SHIMMABLE_APIS = {
    "os.urandom",
    "secrets.token_bytes",
    "secrets.token_hex",
    "random.randbytes",
}

# APIs recognized as randomness sources (superset of the shimmable ones).
RANDOM_APIS = SHIMMABLE_APIS | {
    "random.randint",
    "random.random",
    "random.randrange",
    "random.choice",
    "random.getrandbits",
    "random.SystemRandom",
    "new SecureRandom",
    "<expr>.nextBytes",
}

RNG_CATEGORY_VALUES = {"Seed Generation", "Random Number Generation"}


def stream_byte(index: int) -> int:
    return (131 * index + 7) % 256


class MockRandomStream:
    """The predefined byte stream; a single cursor spans all draws."""

    def __init__(self):
        self.cursor = 0

    def take(self, n: int) -> bytes:
        start = self.cursor
        self.cursor += n
        return bytes(stream_byte(start + i) for i in range(n))


@dataclass(frozen=True)
class ShimSpec:
    kind: str  # "none" | "mock-stream"

    @property
    def active(self) -> bool:
        return self.kind != "none"


NO_SHIM = ShimSpec("none")
MOCK_STREAM = ShimSpec("mock-stream")


def _random_sites(record: FunctionRecord) -> list[str]:
    hits = []
    for site in record.call_sites:
        symbol = site.callee_symbol
        terminal = symbol.rsplit(".", 1)[-1]
        for api in RANDOM_APIS:
            if symbol == api or terminal == api.rsplit(".", 1)[-1]:
                hits.append(symbol)
                break
    return hits


def uses_randomness(record: FunctionRecord, verdict=None) -> bool:
    """Randomness flag: RNG verdict categories or detected random-API calls."""
    if verdict is not None:
        categories = {c.value for c in verdict.categories}
        if categories & RNG_CATEGORY_VALUES:
            return True
    return bool(_random_sites(record))


def resolve_shim(record: FunctionRecord, verdict=None) -> ShimSpec:
    """Shim for a record: identity when no randomness, mock stream when all
    random calls are shimmable, otherwise an error naming the offenders."""
    sites = _random_sites(record)
    if not sites and not uses_randomness(record, verdict):
        return NO_SHIM
    unshimmable = [
        s
        for s in sites
        if not any(
            s == api or s.rsplit(".", 1)[-1] == api.rsplit(".", 1)[-1]
            for api in SHIMMABLE_APIS
        )
    ]
    if unshimmable:
        raise UnshimmableRandomnessError(
            f"{record.fqid}: no mockable entry point for {sorted(set(unshimmable))}"
        )
    return MOCK_STREAM
