"""Glue used by the sample ingestion pipeline."""

import urllib.request


def helper_strip(s: str) -> str:
    return s.strip()


def clean_and_upper(s: str) -> str:
    return helper_strip(s).upper()


def hash_file_summary(path, mode="name"):
    label = str(path)
    if mode == "name":
        return label
    return label + ":" + mode


def fetch_remote(url: str) -> str:
    with urllib.request.urlopen(url) as response:
        return response.read().decode("utf-8")


class TokenCache:
    def __init__(self, token: str):
        self._token = token

    def cached_token(self) -> str:
        return self._token

    def describe(self, token: str) -> str:
        return "token:" + token

    @staticmethod
    def mask(token: str) -> str:
        if len(token) <= 4:
            return "****"
        return token[:2] + "****" + token[-2:]
