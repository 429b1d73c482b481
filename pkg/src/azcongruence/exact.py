"""Exact combinatorial primitives.

Integers are Python ints and rationals are :class:`fractions.Fraction`, which
is always kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

import threading
from fractions import Fraction

_fact_lock = threading.Lock()
_fact = [1]

_harm_lock = threading.Lock()
_harm = [Fraction(0)]


def factorial(n: int) -> int:
    """Return ``n!``; the table of factorials grows on demand and is shared."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    if n < len(_fact):
        return _fact[n]
    with _fact_lock:
        table = _fact
        acc = table[-1]
        for j in range(len(table), n + 1):
            acc *= j
            table.append(acc)
    return _fact[n]


def binomial(a: int, k: int) -> int:
    """Generalized binomial coefficient ``a(a-1)...(a-k+1)/k!``.

    Zero for ``k < 0``. Negative ``a`` is allowed, e.g. ``binomial(-1, j)``
    equals ``(-1)**j``.
    """
    if k < 0:
        return 0
    if a >= 0:
        if k > a:
            return 0
        return factorial(a) // (factorial(k) * factorial(a - k))
    # upper negation: C(a, k) = (-1)^k C(k - a - 1, k)
    sign = -1 if k & 1 else 1
    return sign * binomial(k - a - 1, k)


def trinomial(k: int) -> int:
    """``(3k)! / (k!)^3``."""
    if k < 0:
        raise ValueError(f"trinomial needs k >= 0, got {k}")
    return factorial(3 * k) // factorial(k) ** 3


def multinomial_equal(parts: int, m: int) -> int:
    """``(parts*m)! / (m!)^parts``, the multinomial with all parts equal to m."""
    if parts < 1 or m < 0:
        raise ValueError(f"multinomial_equal needs parts >= 1, m >= 0; got {parts}, {m}")
    return factorial(parts * m) // factorial(m) ** parts


def harmonic(n: int) -> Fraction:
    """n-th harmonic number ``1 + 1/2 + ... + 1/n``; ``harmonic(0) == 0``."""
    if n < 0:
        raise ValueError(f"harmonic needs n >= 0, got {n}")
    if n < len(_harm):
        return _harm[n]
    with _harm_lock:
        table = _harm
        acc = table[-1]
        for j in range(len(table), n + 1):
            acc += Fraction(1, j)
            table.append(acc)
    return _harm[n]


def int_pow(x: Fraction | int, e: int) -> Fraction:
    """Exact ``x**e`` for an integer exponent (negative allowed if x != 0)."""
    x = Fraction(x)
    if x == 0 and e < 0:
        raise ZeroDivisionError("zero raised to a negative power")
    return x**e
