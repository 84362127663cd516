"""Small numeric helpers."""

import math


def clamp(value: float, low: float, high: float) -> float:
    if value < low:
        return low
    if value > high:
        return high
    return value


def sign_label(x: float) -> str:
    if x < 0.0:
        return "negative"
    else:
        return "non-negative"


def mean(values: list[float]) -> float:
    if not values:
        return 0.0
    return sum(values) / len(values)


def hypotenuse(a: float, b: float) -> float:
    return math.sqrt(a * a + b * b)


def int_pow_mod(base: int, exp: int, mod: int) -> int:
    result = 1
    cursor = base % mod
    remaining = exp
    while remaining > 0:
        if remaining % 2 == 1:
            result = (result * cursor) % mod
        cursor = (cursor * cursor) % mod
        remaining = remaining // 2
    return result


def fibonacci(n: int) -> int:
    if n < 2:
        return n
    return fibonacci(n - 1) + fibonacci(n - 2)
