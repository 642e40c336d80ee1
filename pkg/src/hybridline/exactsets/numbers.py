"""Exact rational helpers: parsing, printing, and multiplicative bookkeeping."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Value = Union[Fraction, float]  # float only ever holds +/-inf

INF = math.inf
NINF = -math.inf


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if not s:
        raise ValueError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def parse_value(text: str) -> Value:
    """Like parse_rational but also accepts ``inf``/``-inf``."""
    s = text.strip().lower()
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return NINF
    return parse_rational(s)


def fmt(x: Value) -> str:
    if x == INF:
        return "inf"
    if x == NINF:
        return "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def height(x: Fraction) -> int:
    return abs(x.numerator) + x.denominator


def floor_log2_inverse(d: Fraction) -> int:
    """Smallest i >= 0 with 2**-i <= d, for 0 < d."""
    if d <= 0:
        raise ValueError("d must be positive")
    if d >= 1:
        return 0
    # 2**-i <= d  <=>  2**i >= 1/d
    inv = 1 / d
    i = max(0, math.ceil(math.log2(inv.numerator) - math.log2(inv.denominator)) - 2)
    while Fraction(1, 2**i) > d:
        i += 1
    while i > 0 and Fraction(1, 2 ** (i - 1)) <= d:
        i -= 1
    return i


def coprime_basis(values: Iterable[int]) -> list[int]:
    """Refine positive integers into a pairwise coprime basis.

    Every input is a product of powers of the returned elements. Uses gcd
    splitting only, so no integer factorisation is attempted.
    """
    work = sorted({v for v in values if v > 1})
    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                g = math.gcd(work[i], work[j])
                if g > 1:
                    a, b = work[i], work[j]
                    rest = [w for k, w in enumerate(work) if k not in (i, j)]
                    new = rest + [v for v in (a // g, b // g, g) if v > 1]
                    work = sorted(set(new))
                    changed = True
                    break
            if changed:
                break
    return work


def _int_exponents(n: int, basis: Sequence[int]) -> list[int]:
    out = []
    for b in basis:
        e = 0
        while n % b == 0:
            n //= b
            e += 1
        out.append(e)
    if n != 1:
        raise ArithmeticError("basis does not cover value")
    return out


def exponent_vector(x: Fraction, basis: Sequence[int]) -> list[int]:
    """Exponents of positive rational ``x`` over a coprime basis."""
    if x <= 0:
        raise ValueError("exponent_vector needs a positive rational")
    num = _int_exponents(x.numerator, basis)
    den = _int_exponents(x.denominator, basis)
    return [p - q for p, q in zip(num, den)]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)
