"""p-adic valuations and the congruence predicate on exact rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Valuation of zero. Compares greater than every int, so ``vp(0) >= k`` holds
# for every precision k.
INF = math.inf

Valuation = int | float  # finite int, or INF


def is_prime(n: int) -> bool:
    """Deterministic trial division; intended for small primes."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    # strip large prime powers first so huge numerators stay cheap
    step, pk = 1, p
    while n % pk == 0:
        n //= pk
        v += step
        step, pk = step * 2, pk * pk
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: Fraction | int, p: int) -> Valuation:
    """p-adic valuation of a rational; ``INF`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


@dataclass(frozen=True)
class PadicContext:
    """A prime ``p >= 5`` together with a precision ``k``: congruence mod p**k."""

    p: int
    k: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p < 5:
            raise ValueError(f"p must be at least 5, got {self.p}")
        if self.k < 1:
            raise ValueError(f"precision must be positive, got {self.k}")

    @property
    def modulus(self) -> int:
        return self.p**self.k


def congruent(x: Fraction | int, y: Fraction | int, ctx: PadicContext) -> bool:
    """True iff ``vp(x - y) >= k``. Works for p-integral and non-integral rationals alike."""
    return vp(Fraction(x) - Fraction(y), ctx.p) >= ctx.k


def fermat_quotient(x: Fraction | int, p: int) -> Fraction:
    """``(x**(p-1) - 1) / p`` for a p-adic unit x."""
    x = Fraction(x)
    if x == 0 or vp(x, p) != 0:
        raise ValueError(f"Fermat quotient needs a {p}-adic unit, got {x}")
    return (x ** (p - 1) - 1) / p


def reduce_residue(x: Fraction | int, ctx: PadicContext) -> int:
    """The representative of x in ``[0, p**k)``; x must be p-integral."""
    x = Fraction(x)
    if vp(x, ctx.p) < 0:
        raise ValueError(f"{x} is not {ctx.p}-integral")
    m = ctx.modulus
    return x.numerator * pow(x.denominator, -1, m) % m
