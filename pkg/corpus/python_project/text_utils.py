"""String manipulation helpers."""


def reverse_words(text: str) -> str:
    return " ".join(reversed(text.split()))


def count_vowels(text: str) -> int:
    count = 0
    for ch in text.lower():
        if ch in "aeiou":
            count = count + 1
    return count


def normalize_spaces(text: str) -> str:
    return " ".join(text.split())


def shout(text: str) -> str:
    return text.upper() + "!"
