"""Encoding and record (de)serialization helpers."""

import base64
import pickle


def encode_b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def decode_b64(text: str) -> bytes:
    return base64.b64decode(text.encode("ascii"))


def csv_join(fields: list[str]) -> str:
    parts = []
    for field in fields:
        if ("," in field) or ('"' in field):
            escaped = field.replace('"', '""')
            parts.append('"' + escaped + '"')
        else:
            parts.append(field)
    return ",".join(parts)


def csv_split(line: str) -> list[str]:
    fields = []
    current = ""
    in_quotes = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_quotes:
            if ch == '"':
                if i + 1 < len(line) and line[i + 1] == '"':
                    current = current + '"'
                    i = i + 1
                else:
                    in_quotes = False
            else:
                current = current + ch
        elif ch == '"':
            in_quotes = True
        elif ch == ",":
            fields.append(current)
            current = ""
        else:
            current = current + ch
        i = i + 1
    fields.append(current)
    return fields


def pickle_roundtrip(data: bytes) -> bytes:
    return pickle.dumps(pickle.loads(data))
