"""Hashing, toy ciphers and token helpers used across the sample project."""

import hashlib
import hmac
import os
import random
import secrets


def sha256_hex(data: str) -> str:
    return hashlib.sha256(data.encode()).hexdigest()


def sha256_bytes(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def salted_digest(password: str, salt_len: int) -> str:
    salt = os.urandom(salt_len)
    digest = hashlib.sha256(salt + password.encode()).hexdigest()
    return digest + ":" + salt.hex()


def xor_encrypt(data: bytes, key: bytes) -> bytes:
    if not key:
        raise ValueError("empty key")
    out = bytearray()
    for i in range(len(data)):
        out.append(data[i] ^ key[i % len(key)])
    return bytes(out)


def xor_decrypt(data: bytes, key: bytes) -> bytes:
    if not key:
        raise ValueError("empty key")
    out = bytearray()
    for i in range(len(data)):
        out.append(data[i] ^ key[i % len(key)])
    return bytes(out)


def keystream_bytes(seed: int, n: int) -> bytes:
    state = (seed | 1) & 0xFFFFFFFFFFFFFFFF
    out = bytearray()
    for _ in range(n):
        state = (state ^ (state << 13)) & 0xFFFFFFFFFFFFFFFF
        state = state ^ (state >> 7)
        state = (state ^ (state << 17)) & 0xFFFFFFFFFFFFFFFF
        out.append(state & 0xFF)
    return bytes(out)


def hmac_tag(key: bytes, message: bytes) -> str:
    return hmac.new(key, message, hashlib.sha256).hexdigest()


def verify_tag(key: bytes, message: bytes, expected: str) -> bool:
    tag = hmac.new(key, message, hashlib.sha256).hexdigest()
    return hmac.compare_digest(tag, expected)


def token_hex(nbytes: int) -> str:
    return secrets.token_hex(nbytes)


def generate_key(password: str, rounds: int) -> str:
    if rounds < 1:
        raise ValueError("rounds must be positive")
    digest = password.encode()
    for _ in range(rounds):
        digest = hashlib.sha256(digest).digest()
    return digest.hex()


def roll_dice(n: int) -> int:
    total = 0
    for _ in range(n):
        total += random.randint(1, 6)
    return total
