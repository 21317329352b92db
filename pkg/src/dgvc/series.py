"""Truncated univariate power series with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

Series = list[Fraction]


def mul(a: Series, b: Series, n: int) -> Series:
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def inverse(a: Series, n: int) -> Series:
    if not a or a[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / a[0]
    for k in range(1, n + 1):
        s = sum((a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        out[k] = -s / a[0]
    return out


def exp_series(n: int, scale=1) -> Series:
    """Coefficients of e^{scale x} up to x^n."""
    return [Fraction(scale) ** k / factorial(k) for k in range(n + 1)]


def todd_series(n: int) -> Series:
    """x / (1 - e^{-x})."""
    # (1 - e^{-x})/x = sum_k (-1)^k x^k / (k+1)!
    base = [Fraction((-1) ** k, factorial(k + 1)) for k in range(n + 1)]
    return inverse(base, n)


def log_series(a: Series, n: int) -> Series:
    """log(a) for a[0] == 1, via log(a)' = a'/a."""
    if a[0] != 1:
        raise ValueError("log needs constant term 1")
    da = [a[k] * k for k in range(1, len(a))] + [Fraction(0)]
    q = mul(da, inverse(a, n), n)
    return [Fraction(0)] + [q[k - 1] / k for k in range(1, n + 1)]


def power(a: Series, k: int, n: int) -> Series:
    out = [Fraction(1)] + [Fraction(0)] * n
    if k < 0:
        a = inverse(a, n)
        k = -k
    for _ in range(k):
        out = mul(out, a, n)
    return out
