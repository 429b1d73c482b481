"""The Almkvist-Zudilin family a_i(n), Apery numbers, the auxiliary sums
b_j(n), and both sides of the single-sum reduction for a_0(pn)."""

from __future__ import annotations

import threading
from enum import Enum
from fractions import Fraction

from azcongruence.exact import binomial, int_pow
from azcongruence.padic import fermat_quotient


class Family(str, Enum):
    AZ_A = "AZ_A"
    APERY = "APERY"
    B = "B"
    B_PLAIN = "B_PLAIN"


class SequenceCache:
    """Memo of sequence values keyed by ``(family, index, n)``.

    Values are deterministic, so two threads racing on the same key only
    duplicate work; the lock just keeps the dict consistent.
    """

    def __init__(self):
        self._values: dict[tuple[str, int, int], Fraction] = {}
        self._lock = threading.Lock()
        self._dirty = False

    def get(self, key):
        return self._values.get(key)

    def put(self, key, value: Fraction) -> None:
        with self._lock:
            if key not in self._values:
                self._values[key] = value
                self._dirty = True

    def load(self, entries) -> None:
        """Seed from ``(key, value)`` pairs without marking the cache dirty."""
        with self._lock:
            for key, value in entries:
                self._values.setdefault(key, Fraction(value))

    def items(self):
        with self._lock:
            return sorted(self._values.items())

    @property
    def dirty(self) -> bool:
        return self._dirty

    def mark_clean(self) -> None:
        self._dirty = False

    def clear(self) -> None:
        with self._lock:
            self._values.clear()
            self._dirty = False

    def __len__(self):
        return len(self._values)


CACHE = SequenceCache()


def _cached(family: Family, index: int, n: int, compute):
    key = (family.value, index, n)
    hit = CACHE.get(key)
    if hit is not None:
        return hit
    value = compute()
    CACHE.put(key, Fraction(value))
    return value


def _az_a_term(i: int, n: int, k: int) -> int:
    sign = -1 if (n - k) % 2 else 1
    return (
        sign
        * binomial(3 * k + i, k)
        * binomial(2 * k + i, k)
        * binomial(n, 3 * k + i)
        * binomial(n + k, k)
        * 3 ** (n - 3 * k - i)
    )


def az_a(i: int, n: int) -> int:
    """a_i(n); zero when n < i, and a_0(0) = 1."""
    if i < 0 or n < 0:
        raise ValueError(f"az_a needs i >= 0 and n >= 0, got i={i}, n={n}")

    def compute():
        if n < i:
            return 0
        return sum(_az_a_term(i, n, k) for k in range((n - i) // 3 + 1))

    return int(_cached(Family.AZ_A, i, n, compute))


def apery(n: int) -> int:
    """A(n) = sum_k C(n,k)^2 C(n+k,k)^2."""
    if n < 0:
        raise ValueError(f"apery needs n >= 0, got {n}")

    def compute():
        return sum((binomial(n, k) * binomial(n + k, k)) ** 2 for k in range(n + 1))

    return int(_cached(Family.APERY, 0, n, compute))


def az_b(j: int, n: int) -> Fraction:
    """b_j(n), summed literally over 0 <= k <= n-1."""
    if j < 1 or n < 1:
        raise ValueError(f"az_b needs j >= 1 and n >= 1, got j={j}, n={n}")

    def compute():
        total = Fraction(0)
        for k in range(n):
            c = binomial(n, 3 * k)
            if c == 0:
                continue
            sign = -1 if (n - k) % 2 else 1
            num = sign * (n - 3 * k) * binomial(3 * k, k) * binomial(2 * k, k) * c
            num *= binomial(n + k, k) * 3 ** (n - 3 * k)
            total += Fraction(num, k + j)
        return total

    return _cached(Family.B, j, n, compute)


def az_b_plain(j: int, n: int) -> Fraction:
    """b_j(n) without the (n - 3k) weight: sum_k T_k / (k + j).

    This is the sum the partial-fraction expansion of a_i(n) actually needs;
    with it, a_1(n) = -a_0(n) + (n + 3)/3 * b_1(n) holds exactly.
    """
    if j < 1 or n < 1:
        raise ValueError(f"az_b_plain needs j >= 1 and n >= 1, got j={j}, n={n}")

    def compute():
        total = Fraction(0)
        for k in range(n):
            c = binomial(n, 3 * k)
            if c == 0:
                continue
            sign = -1 if (n - k) % 2 else 1
            num = sign * binomial(3 * k, k) * binomial(2 * k, k) * c
            num *= binomial(n + k, k) * 3 ** (n - 3 * k)
            total += Fraction(num, k + j)
        return total

    return _cached(Family.B_PLAIN, j, n, compute)


def reduction_term(p: int, m: int, n: int, r: int) -> Fraction:
    """One summand (-1)^r C(3pm+3r,pm+r) C(2pm+2r,pm+r) C(pn,3pm+3r) C(p(n+m)+r,pm+r) 3^(-3r)."""
    k = p * m + r
    c = binomial(p * n, 3 * k)
    if c == 0:
        return Fraction(0)
    sign = -1 if r % 2 else 1
    num = sign * binomial(3 * k, k) * binomial(2 * k, k) * c * binomial(p * (n + m) + r, k)
    return Fraction(num, 27**r)


def reduction_lhs(p: int, m: int, n: int, include_r0: bool) -> Fraction:
    """Single sum over r in [1, p) (or [0, p) when ``include_r0``)."""
    start = 0 if include_r0 else 1
    return sum((reduction_term(p, m, n, r) for r in range(start, p)), Fraction(0))


Q_FORM = "Q_FORM"
POWER_FORM = "POWER_FORM"


def reduction_rhs(p: int, m: int, n: int, form: str) -> Fraction:
    """Right side of the reduction, as a Fermat quotient or as a power of 3."""
    base = binomial(3 * m, m) * binomial(2 * m, m) * binomial(n, 3 * m) * binomial(n + m, m)
    if base == 0:
        return Fraction(0)
    shift = n - 3 * m
    if form == Q_FORM:
        return p * base * fermat_quotient(int_pow(3, -shift), p)
    if form == POWER_FORM:
        return base * int_pow(3, -shift * (p - 1))
    raise ValueError(f"unknown form {form!r}")
