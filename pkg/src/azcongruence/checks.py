"""Verifiable congruences and identities for the Almkvist-Zudilin family.

Every check instantiates one statement at concrete integer parameters,
evaluates both sides exactly and compares them through the p-adic valuation
of their difference. A check either returns a :class:`CheckOutcome` or raises
:class:`ParameterError` when the parameters fall outside the statement's
hypotheses.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from azcongruence import sequences
from azcongruence.exact import binomial, harmonic, int_pow, multinomial_equal, trinomial
from azcongruence.padic import INF, Valuation, fermat_quotient, is_prime, vp
from azcongruence.sequences import az_a, az_b, az_b_plain, reduction_lhs, reduction_rhs

C = binomial
H = harmonic


class ParameterError(ValueError):
    """Parameters violate the hypotheses of the statement being checked."""


@dataclass(frozen=True)
class CheckCase:
    check_id: str
    params: Mapping[str, int]

    def key(self):
        return (self.check_id, tuple(sorted(self.params.items())))


@dataclass(frozen=True)
class CheckOutcome:
    """Result of one check.

    ``achieved_valuation`` is ``vp(lhs - rhs)``; the check passes iff it
    reaches ``required_valuation``. Exact identities require ``INF``.
    Multi-part statements carry their sub-results in ``parts`` and mirror
    the weakest part at top level. An outcome with ``achieved_valuation`` of
    None records an error (see ``note``).
    """

    check_id: str
    params: Mapping[str, int]
    passed: bool
    required_valuation: Valuation
    achieved_valuation: Valuation | None
    lhs: Fraction | None
    rhs: Fraction | None
    note: str = ""
    part: str = ""
    parts: tuple["CheckOutcome", ...] = ()

    @property
    def error(self) -> bool:
        return self.achieved_valuation is None

    @property
    def conjectural(self) -> bool:
        return is_conjectural(self.check_id, self.params)

    def leaves(self) -> list["CheckOutcome"]:
        if not self.parts:
            return [self]
        return [leaf for sub in self.parts for leaf in sub.leaves()]

    def with_precision(self, k: Valuation) -> "CheckOutcome":
        """Same comparison judged at another precision."""
        return replace(
            self,
            required_valuation=k,
            passed=self.achieved_valuation is not None and self.achieved_valuation >= k,
            parts=(),
        )


def is_conjectural(check_id: str, params: Mapping[str, int]) -> bool:
    if check_id in ("CONJ71", "B1_CHAIN"):
        return True
    return check_id == "HIGHER" and params.get("r", 1) >= 2


def _compare(check_id, params, lhs, rhs, required, p=None, note="", part=""):
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    if p is None:
        achieved = INF if lhs == rhs else 0
    else:
        achieved = vp(lhs - rhs, p)
    passed = achieved >= required
    if not passed and is_conjectural(check_id, params):
        shown = ", ".join(f"{k}={v}" for k, v in params.items())
        note = f"conjecture violated at {shown}" + (f"; {note}" if note else "")
    return CheckOutcome(check_id, dict(params), passed, required, achieved, lhs, rhs, note, part)


def _slack(o: CheckOutcome):
    if o.achieved_valuation == INF:
        return INF
    if o.required_valuation == INF:
        return -INF
    return o.achieved_valuation - o.required_valuation


def _combine(check_id, params, parts: list[CheckOutcome], note="") -> CheckOutcome:
    weakest = min(parts, key=_slack)
    text = f"weakest part: {weakest.part}"
    extra = "; ".join(x for x in [weakest.note, note] if x)
    return CheckOutcome(
        check_id,
        dict(params),
        all(o.passed for o in parts),
        weakest.required_valuation,
        weakest.achieved_valuation,
        weakest.lhs,
        weakest.rhs,
        f"{text}; {extra}" if extra else text,
        "",
        tuple(parts),
    )


# hypothesis helpers

def _need_prime(p):
    if not is_prime(p):
        raise ParameterError(f"p={p} is not prime")
    if p < 5:
        raise ParameterError(f"p={p} must be at least 5")


def _need(cond: bool, msg: str):
    if not cond:
        raise ParameterError(msg)


def _q3inv(p) -> Fraction:
    return fermat_quotient(Fraction(1, 3), p)


# section 1 and 3 statements

def check_main(p: int, n: int) -> CheckOutcome:
    """a_0(pn) == a_0(n) mod p^3."""
    _need_prime(p)
    _need(n >= 1, "n must be positive")
    return _compare("MAIN_SUPERCONGRUENCE", {"p": p, "n": n}, az_a(0, p * n), az_a(0, n), 3, p)


def check_higher(p: int, r: int, n: int) -> CheckOutcome:
    """a_0(p^r n) == a_0(p^(r-1) n) mod p^(3r); r >= 2 is conjectural."""
    _need_prime(p)
    _need(r >= 1, "r must be positive")
    _need(n >= 1, "n must be positive")
    note = "conjectural strengthening" if r >= 2 else ""
    return _compare(
        "HIGHER", {"p": p, "r": r, "n": n},
        az_a(0, p**r * n), az_a(0, p ** (r - 1) * n), 3 * r, p, note,
    )


def check_ai_vanish(p: int, i: int, n: int) -> CheckOutcome:
    """a_i(pn) == 0 mod p^2 for 0 < i < p/3."""
    _need_prime(p)
    _need(i >= 1 and 3 * i < p, f"need 1 <= i < p/3, got i={i}, p={p}")
    _need(n >= 1, "n must be positive")
    return _compare("THM31_VANISH", {"p": p, "i": i, "n": n}, az_a(i, p * n), 0, 2, p)


def check_lucas(p: int, b: int, c: int, d: int, e: int) -> CheckOutcome:
    """Lucas mod p on base-p digits, and C(pb, pd) == C(b, d) mod p^3."""
    _need_prime(p)
    _need(b >= 0 and d >= 0, "b and d must be nonnegative")
    _need(0 <= c < p and 0 <= e < p, "c and e must be base-p digits")
    params = {"p": p, "b": b, "c": c, "d": d, "e": e}
    parts = [
        _compare("LUCAS", params, C(p * b + c, p * d + e), C(b, d) * C(c, e), 1, p, part="mod_p"),
        _compare("LUCAS", params, C(p * b, p * d), C(b, d), 3, p, part="mod_p3"),
    ]
    return _combine("LUCAS", params, parts)


def check_gessel(p: int, j: int) -> CheckOutcome:
    """C(p, j) == (-1)^(j-1) p/j mod p^2."""
    _need_prime(p)
    _need(0 < j < p, f"need 0 < j < p, got j={j}")
    sign = 1 if j % 2 else -1
    return _compare("GESSEL", {"p": p, "j": j}, C(p, j), Fraction(sign * p, j), 2, p)


# preliminary identities

def check_harmonic_identity(n: int) -> CheckOutcome:
    """Exact: sum_{k=1}^n (-1)^k C(n,k) C(n+k,k)/k = -2 H_n."""
    _need(n >= 1, "n must be positive")
    lhs = sum(
        (Fraction((-1) ** k * C(n, k) * C(n + k, k), k) for k in range(1, n + 1)), Fraction(0)
    )
    return _compare("IDH", {"n": n}, lhs, -2 * H(n), INF)


def check_partial_fraction(n: int, y: Fraction) -> CheckOutcome:
    """Exact partial-fraction identity at a rational point y."""
    y = Fraction(y)
    _need(n >= 1, "n must be positive")
    _need(not (y.denominator == 1 and -n <= y <= 0), f"y={y} is a pole")
    lhs = sum(
        (Fraction((-1) ** k * C(n, k) * C(n + k, k)) / (k + y) for k in range(n + 1)), Fraction(0)
    )
    rhs = Fraction((-1) ** n) / y
    for j in range(1, n + 1):
        rhs *= (y - j) / (y + j)
    params = {"n": n, "y_num": y.numerator, "y_den": y.denominator}
    return _compare("MORT", params, lhs, rhs, INF)


def check_floor_binomial(p: int, k: int) -> CheckOutcome:
    """(-1)^k C(floor(p/3), k) C(floor(p/3)+k, k) == trinomial(k) 27^-k mod p."""
    _need_prime(p)
    _need(0 <= k and 3 * k < p, f"need 0 <= k < p/3, got k={k}")
    f = p // 3
    lhs = (-1) ** k * C(f, k) * C(f + k, k)
    rhs = Fraction(trinomial(k), 27**k)
    return _compare("LEMMA23", {"p": p, "k": k}, lhs, rhs, 1, p)


def _tri_sum(lo, hi, weight) -> Fraction:
    return sum((Fraction(trinomial(k), 27**k) * weight(k) for k in range(lo, hi + 1)), Fraction(0))


def check_trinomial_sums(p: int, i: int) -> CheckOutcome:
    """The four chained congruences on sums of trinomial(k) 27^-k / k and / (k+i)."""
    _need_prime(p)
    _need(i >= 1 and 3 * i < p, f"need 0 < i < p/3, got i={i}")
    params = {"p": p, "i": i}
    f = p // 3
    first_full = _tri_sum(1, p - 1, lambda k: Fraction(1, k))
    first_floor = _tri_sum(1, f, lambda k: Fraction(1, k))
    second_full = _tri_sum(0, p - 1, lambda k: Fraction(1, k + i))
    second_floor = _tri_sum(0, f, lambda k: Fraction(1, k + i))
    parts = [
        _compare("COR24", params, first_full, first_floor, 1, p, part="first_full_vs_floor"),
        _compare("COR24", params, first_floor, 3 * fermat_quotient(3, p), 1, p, part="first_floor_vs_3q3"),
        _compare("COR24", params, second_full, second_floor, 1, p, part="second_full_vs_floor"),
        _compare("COR24", params, second_floor, 0, 1, p, part="second_floor_vs_0"),
    ]
    return _combine("COR24", params, parts)


# the reduction

def check_reduction(p: int, m: int, n: int) -> CheckOutcome:
    """Both forms of the single-sum reduction, mod p^3."""
    _need_prime(p)
    _need(m >= 0 and n >= 1, "need m >= 0 and n >= 1")
    params = {"p": p, "m": m, "n": n}
    note = "vacuous: C(n, 3m) = 0" if 3 * m > n else ""
    parts = [
        _compare("REDUCTION", params, reduction_lhs(p, m, n, False),
                 reduction_rhs(p, m, n, sequences.Q_FORM), 3, p, note, "from_r1_q_form"),
        _compare("REDUCTION", params, reduction_lhs(p, m, n, True),
                 reduction_rhs(p, m, n, sequences.POWER_FORM), 3, p, note, "from_r0_power_form"),
    ]
    return _combine("REDUCTION", params, parts)


# binomial toolbox

def _l1_case(p, a, b, j):
    _need_prime(p)
    _need(a > b >= 0, f"need a > b >= 0, got a={a}, b={b}")
    _need(0 < j < p, f"need 0 < j < p, got j={j}")
    return {"p": p, "a": a, "b": b, "j": j}


def _r_case(p, m, r, positive=False):
    _need_prime(p)
    _need(m >= 0, "m must be nonnegative")
    lo = 1 if positive else 0
    _need(lo <= r < p, f"need {lo} <= r < p, got r={r}")


def check_l1a(p: int, a: int, b: int, j: int) -> CheckOutcome:
    params = _l1_case(p, a, b, j)
    return _compare("LEMMA51_L1A", params, C(a * p, b * p + j), (a - b) * C(a, b) * C(p, j), 2, p)


def check_l1b(p: int, a: int, b: int, j: int) -> CheckOutcome:
    params = _l1_case(p, a, b, j)
    return _compare("LEMMA51_L1B", params, C(a * p, b * p - j), b * C(a, b) * C(p, j), 2, p)


def l2_rhs(p, m, n, r):
    return C(n + m, m) * (1 + n * (C(p + r, r) - 1))


def check_l2(p: int, m: int, n: int, r: int) -> CheckOutcome:
    _r_case(p, m, r)
    _need(n >= 1, "n must be positive")
    lhs = C(p * (n + m) + r, p * m + r)
    return _compare("LEMMA51_L2", {"p": p, "m": m, "n": n, "r": r}, lhs, l2_rhs(p, m, n, r), 2, p)


def check_l3(p: int, m: int, r: int) -> CheckOutcome:
    _r_case(p, m, r)
    lhs = C(2 * p * m + 2 * r, p * m + r)
    rhs = C(2 * m, m) * (C(2 * r, r) + 2 * m * C(p + 2 * r, r) - 2 * m * C(2 * r, r))
    return _compare("LEMMA51_L3", {"p": p, "m": m, "r": r}, lhs, rhs, 2, p)


def check_l4(p: int, m: int, r: int) -> CheckOutcome:
    _r_case(p, m, r)
    lhs = C(3 * p * m + 3 * r, p * m + r)
    rhs = C(3 * m, m) * (
        2 * m * C(p + 3 * r, r) + m * C(p + 3 * r, 2 * r) - (3 * m - 1) * C(3 * r, r)
    ) + C(3 * m, m - 1) * (
        C(3 * r, p + r) + (m - 1) * C(p + 3 * r, 2 * p + r) - 3 * m * C(3 * r, p + r)
    )
    return _compare("LEMMA51_L4", {"p": p, "m": m, "r": r}, lhs, rhs, 2, p)


def _u_r(p, m, n, r):
    t = 3 * r - 1
    return (
        (3 * m + 1) * C(n - 1, 3 * m + 1) * (C(2 * p - 1, t) - C(p - 1, t) - C(p - 1, t - p))
        + (3 * m + 2) * C(n - 1, 3 * m + 2) * (C(2 * p - 1, t - p) - C(p - 1, t - p) - C(p - 1, t - 2 * p))
        + (3 * m + 3) * C(n - 1, 3 * m + 3) * (C(2 * p - 1, t - 2 * p) - C(p - 1, t - 2 * p))
        + 3 * m * C(n - 1, 3 * m) * (C(2 * p - 1, p + t) - C(p - 1, t))
        + C(n - 1, 3 * m) * C(p - 1, t)
        + C(n - 1, 3 * m + 1) * C(p - 1, t - p)
        + C(n - 1, 3 * m + 2) * C(p - 1, t - 2 * p)
    )


def check_l5(p: int, m: int, n: int, r: int) -> CheckOutcome:
    """C(pn, 3pm+3r) == pn/(3pm+3r) * U_r mod p^3, U_r in its expanded form."""
    _r_case(p, m, r, positive=True)
    _need(n >= 1, "n must be positive")
    rhs = Fraction(p * n, 3 * p * m + 3 * r) * _u_r(p, m, n, r)
    return _compare("LEMMA51_L5", {"p": p, "m": m, "n": n, "r": r}, C(p * n, 3 * p * m + 3 * r), rhs, 3, p)


def l5v2_rhs(p, m, n, r) -> Fraction:
    eps = 3 * r // p
    sign = -1 if (r - eps) % 2 else 1
    bracket = n * C(p - 1, 3 * r - 1 - eps * p) + sign * (n - 1)
    return Fraction(p * n, 3 * p * m + 3 * r) * C(n - 1, 3 * m + eps) * bracket


def check_l5v2(p: int, m: int, n: int, r: int) -> CheckOutcome:
    _r_case(p, m, r, positive=True)
    _need(n >= 1, "n must be positive")
    return _compare(
        "LEMMA51_L5V2", {"p": p, "m": m, "n": n, "r": r},
        C(p * n, 3 * p * m + 3 * r), l5v2_rhs(p, m, n, r), 3, p, f"eps={3 * r // p}",
    )


LEMMA51_PARTS: dict[str, Callable[..., CheckOutcome]] = {
    "L1a": check_l1a,
    "L1b": check_l1b,
    "L2": check_l2,
    "L3": check_l3,
    "L4": check_l4,
    "L5": check_l5,
    "L5V2": check_l5v2,
}


def check_lemma51(part: str, **params: int) -> CheckOutcome:
    try:
        fn = LEMMA51_PARTS[part]
    except KeyError:
        raise ParameterError(f"unknown Lemma 5.1 part {part!r}") from None
    return fn(**params)


def _digits_case(p, n1, n0, k1, k0):
    _need_prime(p)
    _need(n1 >= 0 and k1 >= 0, "high digits must be nonnegative")
    _need(0 < n0 < p and 0 < k0 < p, "low digits must lie strictly between 0 and p")
    return {"p": p, "n1": n1, "n0": n0, "k1": k1, "k0": k0}


def check_sagan26(p: int, n1: int, n0: int, k1: int, k0: int) -> CheckOutcome:
    """C(np, k) == n C(n-1, k1) C(p, k0) mod p^2 with n = n1 p + n0, k = k1 p + k0."""
    params = _digits_case(p, n1, n0, k1, k0)
    n, k = n1 * p + n0, k1 * p + k0
    return _compare("SAGAN26", params, C(n * p, k), n * C(n - 1, k1) * C(p, k0), 2, p)


def sagan27_rhs(p, n1, n0, k1, k0) -> int:
    return C(n1, k1) * (
        (1 + n1) * C(n0, k0) - (n1 + k1) * C(n0 - p, k0) - k1 * C(n0 - p, k0 + p)
    )


def check_sagan27(p: int, n1: int, n0: int, k1: int, k0: int) -> CheckOutcome:
    """C(n, k) mod p^2 through the base-p digits of n and k."""
    params = _digits_case(p, n1, n0, k1, k0)
    lhs = C(n1 * p + n0, k1 * p + k0)
    return _compare("SAGAN27", params, lhs, sagan27_rhs(p, n1, n0, k1, k0), 2, p)


def check_sagan(part: str, p: int, n1: int, n0: int, k1: int, k0: int) -> CheckOutcome:
    if part == "EQ26":
        return check_sagan26(p, n1, n0, k1, k0)
    if part == "EQ27":
        return check_sagan27(p, n1, n0, k1, k0)
    raise ParameterError(f"unknown part {part!r}")


def check_cor52(p: int, m: int, r: int, A: int = 3) -> CheckOutcome:
    """Equal-part multinomial of (pm + r) mod p^2; A = 3 uses the binomial product."""
    _r_case(p, m, r)
    _need(A >= 1, "A must be positive")
    k = p * m + r
    if A == 3:
        lhs = C(3 * k, k) * C(2 * k, k)
    else:
        lhs = multinomial_equal(A, k)
    rhs = multinomial_equal(A, m) * multinomial_equal(A, r) * (1 + A * p * m * (H(A * r) - H(r)))
    return _compare("COR52", {"p": p, "m": m, "r": r, "A": A}, lhs, rhs, 2, p)


def check_cor54(p: int, m: int, n: int, r: int) -> CheckOutcome:
    _r_case(p, m, r)
    _need(n >= 1, "n must be positive")
    lhs = C(p * (n + m) + r, p * m + r)
    rhs = C(n + m, m) * (1 + p * n * H(r))
    return _compare("COR54", {"p": p, "m": m, "n": n, "r": r}, lhs, rhs, 2, p)


def _branch(p, r) -> int:
    return 1 if 3 * r < p else (2 if 3 * r < 2 * p else 3)


def cor55_rhs(p, m, n, r) -> Fraction:
    big_n = n - 3 * m
    branch = _branch(p, r)
    if branch == 1:
        tail = big_n * (-1 + p * n * H(3 * r - 1))
    elif branch == 2:
        tail = C(big_n, 2) * 2 * (1 - p * n * H(3 * r - 1 - p)) / (3 * m + 1)
    else:
        tail = C(big_n, 3) * 6 * (-1 + p * n * H(3 * r - 1 - 2 * p)) / ((3 * m + 1) * (3 * m + 2))
    sign = -1 if r % 2 else 1
    return (Fraction(p, 3 * r) - Fraction(p * p * m, 3 * r * r)) * sign * C(n, 3 * m) * tail


def check_cor55(p: int, m: int, n: int, r: int) -> CheckOutcome:
    """Three-branch form of C(pn, 3pm+3r) mod p^3."""
    _r_case(p, m, r, positive=True)
    _need(n >= 1, "n must be positive")
    return _compare(
        "COR55", {"p": p, "m": m, "n": n, "r": r},
        C(p * n, 3 * p * m + 3 * r), cor55_rhs(p, m, n, r), 3, p, f"branch {_branch(p, r)}",
    )


def check_T(p: int, which: str) -> CheckOutcome:
    """The three trinomial sums with Fermat-quotient closed forms."""
    _need_prime(p)
    q = _q3inv(p)
    if which == "T1":
        lhs = _tri_sum(1, p - 1, lambda r: Fraction(1, r))
        return _compare("T1", {"p": p}, lhs, -3 * q + Fraction(3 * p, 2) * q * q, 2, p)
    if which == "T2":
        lhs = _tri_sum(1, p - 1, lambda r: Fraction(1, r * r))
        return _compare("T2", {"p": p}, lhs, Fraction(-9, 2) * q * q, 1, p)
    if which == "T3":
        lhs = _tri_sum(1, p - 1, lambda r: (H(3 * r) - H(r)) / r)
        return _compare("T3", {"p": p}, lhs, 0, 1, p)
    raise ParameterError(f"unknown sum {which!r}")


def closecong_lhs(p, m, n) -> Fraction:
    big_n = n - 3 * m
    total = Fraction(0)
    for r in range(1, p):
        branch = _branch(p, r)
        if branch == 1:
            b_r = -1 + p * n * H(3 * r - 1)
        elif branch == 2:
            b_r = (big_n - 1) * (1 - p * n * H(3 * r - 1 - p)) / (3 * m + 1)
        else:
            b_r = ((big_n - 1) * (big_n - 2) * (-1 + p * n * H(3 * r - 1 - 2 * p))
                   / ((3 * m + 1) * (3 * m + 2)))
        total += (
            Fraction(trinomial(r), 27**r)
            * (1 + 3 * p * m * (H(3 * r) - H(r)))
            * (1 + p * n * H(r))
            * (Fraction(1, 3 * r) - Fraction(p * m, 3 * r * r))
            * b_r
        )
    return total


def check_closecong(p: int, m: int, n: int) -> CheckOutcome:
    """The single-sum congruence the reduction is equivalent to, mod p^2."""
    _need_prime(p)
    _need(m >= 0 and 3 * m < n, f"need 0 <= 3m < n, got m={m}, n={n}")
    q = _q3inv(p)
    rhs = q + Fraction(p * (n - 3 * m - 1), 2) * q * q
    note = ""
    if ((3 * m + 1) * (3 * m + 2)) % p == 0:
        note = "p divides (3m+1)(3m+2)"
    return _compare("CLOSECONG", {"p": p, "m": m, "n": n}, closecong_lhs(p, m, n), rhs, 2, p, note)


# conjectural section

def check_conj71(p: int, i: int, n: int) -> CheckOutcome:
    """a_i(pn) against a_1(pn) and against p^2 C(n+2,2) a_1(n), mod p^3."""
    _need(i >= 1 and n >= 1, "i and n must be positive")
    _need_prime(p)
    _need(p > 2 * i, f"need p > 2i, got p={p}, i={i}")
    params = {"p": p, "i": i, "n": n}
    scale = Fraction((-1) ** (i - 1), i * i * C(2 * i - 1, i - 1))
    via_pn = scale * az_a(1, p * n)
    via_n = scale * p * p * C(n + 2, 2) * az_a(1, n)
    notes = []
    for label, value in (("a_1(pn) quotient", via_pn), ("a_1(n) quotient", via_n)):
        if value != 0 and vp(value, p) < 0:
            notes.append(f"{label} is not {p}-integral")
    parts = [
        _compare("CONJ71", params, az_a(i, p * n), via_pn, 3, p, part="via_a1_pn"),
        _compare("CONJ71", params, az_a(i, p * n), via_n, 3, p, part="via_a1_n"),
    ]
    return _combine("CONJ71", params, parts, "; ".join(notes))


def _b1_factor(p, n) -> Fraction:
    return 1 - Fraction(p * n, 3) - Fraction(p * p * (n + 3) * (7 * n + 6), 18)


def check_b1_chain(p: int, n: int, m: int = 0) -> CheckOutcome:
    """b_1(np) congruence and its per-m single-sum refinement, mod p^3.

    b_1 here is the unweighted sum (``az_b_plain``); the value the literal
    (n - 3k)-weighted display reaches is reported in the note.
    """
    _need_prime(p)
    _need(n >= 1 and m >= 0, "need n >= 1 and m >= 0")
    params = {"p": p, "n": n, "m": m}
    factor = _b1_factor(p, n)
    rhs_b1 = p * p * C(n + 3, 3) * az_b_plain(1, n) + factor * az_a(0, n)
    literal = az_b(1, n * p) - (p * p * C(n + 3, 3) * az_b(1, n) + factor * az_a(0, n))
    literal_v = vp(literal, p)
    b1 = _compare("B1_CHAIN", params, az_b_plain(1, n * p), rhs_b1, 3, p,
                  f"weighted b_1 reading reaches valuation {literal_v}", "b1")

    lhs_c = sum(
        (sequences.reduction_term(p, m, n, r) / (p * m + r + 1) for r in range(p)), Fraction(0)
    )
    base = C(3 * m, m) * C(2 * m, m) * C(n, 3 * m) * C(n + m, m)
    rhs_c = (Fraction(p * p, m + 1) * C(n + 3, 3) + factor) * base * int_pow(3, -(n - 3 * m) * (p - 1))
    eq_c = _compare("B1_CHAIN", params, lhs_c, rhs_c, 3, p, part="C")
    return _combine("B1_CHAIN", params, [b1, eq_c])


def check_D_identities(p: int) -> CheckOutcome:
    """Closed forms of two trinomial sums and their reductions.

    The first reduction is judged mod p^2; whether it also holds mod p^3 is
    reported in the note.
    """
    _need_prime(p)
    params = {"p": p}
    q = _q3inv(p)
    central = Fraction(trinomial(p), 27**p)
    s1 = _tri_sum(0, p - 1, lambda r: Fraction(1, r + 1))
    s2 = _tri_sum(0, p - 1, lambda r: Fraction(1, (r + 1) ** 2))
    closed1 = Fraction(9 * p, 2) * central
    closed2 = Fraction(9 * (9 * p + 2), 4) * central - Fraction(9, 2)
    red1 = _compare("D_IDENTITIES", params, s1, p - 3 * p * p * q, 2, p, part="first_mod_p2")
    sharper = "holds" if red1.achieved_valuation >= 3 else "fails"
    red1 = replace(red1, note=f"mod p^3 reading {sharper}")
    parts = [
        _compare("D_IDENTITIES", params, s1, closed1, INF, p, part="exact_first"),
        _compare("D_IDENTITIES", params, s2, closed2, INF, p, part="exact_second"),
        red1,
        _compare("D_IDENTITIES", params, s2, Fraction(-7, 2), 1, p, part="second_mod_p"),
    ]
    return _combine("D_IDENTITIES", params, parts)


def check_E(p: int) -> CheckOutcome:
    """H-weighted trinomial sum == -3/2 mod p."""
    _need_prime(p)
    lhs = _tri_sum(0, p - 1, lambda r: (H(3 * r) - H(r)) / (r + 1))
    return _compare("E_SUM", {"p": p}, lhs, Fraction(-3, 2), 1, p)


def check_decomposition(i: int, n: int) -> CheckOutcome:
    """Exact partial-fraction expansion of a_i(n) through a_0(n) and b_j(n)."""
    _need(i >= 1 and n >= 1, "i and n must be positive")
    rhs = (-1) ** i * az_a(0, n) + Fraction(i, 3**i) * sum(
        ((-1) ** (j - 1) * C(i - 1, j - 1) * C(n + 3 * j, i) * az_b_plain(j, n)
         for j in range(1, i + 1)),
        Fraction(0),
    )
    return _compare("DECOMPOSITION", {"i": i, "n": n}, az_a(i, n), rhs, INF)


@dataclass(frozen=True)
class CheckSpec:
    func: Callable[..., CheckOutcome]
    params: tuple[str, ...]
    description: str
    call: Callable[..., CheckOutcome] | None = field(default=None)

    def run(self, params: Mapping[str, int]) -> CheckOutcome:
        fn = self.call or self.func
        return fn(**params)


REGISTRY: dict[str, CheckSpec] = {
    "MAIN_SUPERCONGRUENCE": CheckSpec(check_main, ("p", "n"), "a_0(pn) == a_0(n) mod p^3"),
    "HIGHER": CheckSpec(check_higher, ("p", "r", "n"), "a_0(p^r n) == a_0(p^(r-1) n) mod p^(3r)"),
    "THM31_VANISH": CheckSpec(check_ai_vanish, ("p", "i", "n"), "a_i(pn) == 0 mod p^2"),
    "LUCAS": CheckSpec(check_lucas, ("p", "b", "c", "d", "e"), "Lucas mod p and mod p^3"),
    "GESSEL": CheckSpec(check_gessel, ("p", "j"), "C(p,j) == (-1)^(j-1) p/j mod p^2"),
    "IDH": CheckSpec(check_harmonic_identity, ("n",), "alternating sum == -2 H_n"),
    "MORT": CheckSpec(
        check_partial_fraction, ("n", "y_num", "y_den"), "partial-fraction identity",
        call=lambda n, y_num, y_den: check_partial_fraction(n, _frac(y_num, y_den)),
    ),
    "LEMMA23": CheckSpec(check_floor_binomial, ("p", "k"), "floor(p/3) binomials mod p"),
    "COR24": CheckSpec(check_trinomial_sums, ("p", "i"), "trinomial reciprocal sums mod p"),
    "REDUCTION": CheckSpec(check_reduction, ("p", "m", "n"), "single-sum reduction mod p^3"),
    "LEMMA51_L1A": CheckSpec(check_l1a, ("p", "a", "b", "j"), "C(ap, bp+j) mod p^2"),
    "LEMMA51_L1B": CheckSpec(check_l1b, ("p", "a", "b", "j"), "C(ap, bp-j) mod p^2"),
    "LEMMA51_L2": CheckSpec(check_l2, ("p", "m", "n", "r"), "C(p(n+m)+r, pm+r) mod p^2"),
    "LEMMA51_L3": CheckSpec(check_l3, ("p", "m", "r"), "C(2pm+2r, pm+r) mod p^2"),
    "LEMMA51_L4": CheckSpec(check_l4, ("p", "m", "r"), "C(3pm+3r, pm+r) mod p^2"),
    "LEMMA51_L5": CheckSpec(check_l5, ("p", "m", "n", "r"), "C(pn, 3pm+3r) via U_r mod p^3"),
    "LEMMA51_L5V2": CheckSpec(check_l5v2, ("p", "m", "n", "r"), "C(pn, 3pm+3r) via eps mod p^3"),
    "SAGAN26": CheckSpec(check_sagan26, ("p", "n1", "n0", "k1", "k0"), "C(np, k) mod p^2"),
    "SAGAN27": CheckSpec(check_sagan27, ("p", "n1", "n0", "k1", "k0"), "C(n, k) by digits mod p^2"),
    "COR52": CheckSpec(check_cor52, ("p", "m", "r", "A"), "equal multinomial mod p^2"),
    "COR54": CheckSpec(check_cor54, ("p", "m", "n", "r"), "C(p(n+m)+r, pm+r) with H_r mod p^2"),
    "COR55": CheckSpec(check_cor55, ("p", "m", "n", "r"), "three-branch C(pn, 3pm+3r) mod p^3"),
    "T1": CheckSpec(check_T, ("p",), "sum trinomial/27^r/r mod p^2", call=lambda p: check_T(p, "T1")),
    "T2": CheckSpec(check_T, ("p",), "sum trinomial/27^r/r^2 mod p", call=lambda p: check_T(p, "T2")),
    "T3": CheckSpec(check_T, ("p",), "H-weighted sum mod p", call=lambda p: check_T(p, "T3")),
    "CLOSECONG": CheckSpec(check_closecong, ("p", "m", "n"), "equivalent single sum mod p^2"),
    "CONJ71": CheckSpec(check_conj71, ("p", "i", "n"), "a_i(pn) mod p^3 (conjectural)"),
    "B1_CHAIN": CheckSpec(check_b1_chain, ("p", "n", "m"), "b_1(np) and per-m sum mod p^3 (conjectural)"),
    "D_IDENTITIES": CheckSpec(check_D_identities, ("p",), "closed-form trinomial sums"),
    "E_SUM": CheckSpec(check_E, ("p",), "H-weighted sum == -3/2 mod p"),
    "DECOMPOSITION": CheckSpec(check_decomposition, ("i", "n"), "a_i(n) through b_j(n), exact"),
}


def _frac(num, den) -> Fraction:
    if den == 0:
        raise ParameterError("y_den must be nonzero")
    return Fraction(num, den)


def _validate_names(case: CheckCase) -> CheckSpec:
    spec = REGISTRY.get(case.check_id)
    if spec is None:
        raise ParameterError(f"unknown check {case.check_id!r}")
    given, wanted = set(case.params), set(spec.params)
    if given != wanted:
        missing = ", ".join(sorted(wanted - given))
        extra = ", ".join(sorted(given - wanted))
        raise ParameterError(
            f"{case.check_id} takes ({', '.join(spec.params)})"
            + (f"; missing {missing}" if missing else "")
            + (f"; unexpected {extra}" if extra else "")
        )
    return spec


def evaluate(case: CheckCase) -> CheckOutcome:
    """Run one case; hypothesis violations propagate as ParameterError."""
    spec = _validate_names(case)
    return spec.run(case.params)


def _error_outcome(case: CheckCase, exc: Exception) -> CheckOutcome:
    return CheckOutcome(case.check_id, dict(case.params), False, 0, None, None, None,
                        f"error: {exc}")


def evaluate_safely(case: CheckCase) -> CheckOutcome:
    try:
        return evaluate(case)
    except (ParameterError, ValueError, ZeroDivisionError) as exc:
        return _error_outcome(case, exc)


def is_valid(case: CheckCase) -> bool:
    """Cheap hypothesis test: run the check's argument validation only."""
    try:
        _validate_names(case)
    except ParameterError:
        return False
    return _HYPOTHESES[case.check_id](**case.params)


def _pok(p):
    return is_prime(p) and p >= 5


_HYPOTHESES: dict[str, Callable[..., bool]] = {
    "MAIN_SUPERCONGRUENCE": lambda p, n: _pok(p) and n >= 1,
    "HIGHER": lambda p, r, n: _pok(p) and r >= 1 and n >= 1,
    "THM31_VANISH": lambda p, i, n: _pok(p) and 1 <= i and 3 * i < p and n >= 1,
    "LUCAS": lambda p, b, c, d, e: _pok(p) and b >= 0 and d >= 0 and 0 <= c < p and 0 <= e < p,
    "GESSEL": lambda p, j: _pok(p) and 0 < j < p,
    "IDH": lambda n: n >= 1,
    "MORT": lambda n, y_num, y_den: n >= 1 and y_den != 0
    and not (y_num % y_den == 0 and -n <= y_num // y_den <= 0),
    "LEMMA23": lambda p, k: _pok(p) and 0 <= k and 3 * k < p,
    "COR24": lambda p, i: _pok(p) and 1 <= i and 3 * i < p,
    "REDUCTION": lambda p, m, n: _pok(p) and m >= 0 and n >= 1,
    "LEMMA51_L1A": lambda p, a, b, j: _pok(p) and a > b >= 0 and 0 < j < p,
    "LEMMA51_L1B": lambda p, a, b, j: _pok(p) and a > b >= 0 and 0 < j < p,
    "LEMMA51_L2": lambda p, m, n, r: _pok(p) and m >= 0 and n >= 1 and 0 <= r < p,
    "LEMMA51_L3": lambda p, m, r: _pok(p) and m >= 0 and 0 <= r < p,
    "LEMMA51_L4": lambda p, m, r: _pok(p) and m >= 0 and 0 <= r < p,
    "LEMMA51_L5": lambda p, m, n, r: _pok(p) and m >= 0 and n >= 1 and 0 < r < p,
    "LEMMA51_L5V2": lambda p, m, n, r: _pok(p) and m >= 0 and n >= 1 and 0 < r < p,
    "SAGAN26": lambda p, n1, n0, k1, k0: _pok(p) and n1 >= 0 and k1 >= 0 and 0 < n0 < p and 0 < k0 < p,
    "SAGAN27": lambda p, n1, n0, k1, k0: _pok(p) and n1 >= 0 and k1 >= 0 and 0 < n0 < p and 0 < k0 < p,
    "COR52": lambda p, m, r, A: _pok(p) and m >= 0 and 0 <= r < p and A >= 1,
    "COR54": lambda p, m, n, r: _pok(p) and m >= 0 and n >= 1 and 0 <= r < p,
    "COR55": lambda p, m, n, r: _pok(p) and m >= 0 and n >= 1 and 0 < r < p,
    "T1": _pok,
    "T2": _pok,
    "T3": _pok,
    "CLOSECONG": lambda p, m, n: _pok(p) and m >= 0 and 3 * m < n,
    "CONJ71": lambda p, i, n: _pok(p) and i >= 1 and n >= 1 and p > 2 * i,
    "B1_CHAIN": lambda p, n, m: _pok(p) and n >= 1 and m >= 0,
    "D_IDENTITIES": _pok,
    "E_SUM": _pok,
    "DECOMPOSITION": lambda i, n: i >= 1 and n >= 1,
}


def grid_cases(check_id: str, **ranges: Iterable[int]) -> list[CheckCase]:
    """All hypothesis-satisfying cases on the Cartesian grid of ``ranges``."""
    spec = REGISTRY.get(check_id)
    if spec is None:
        raise ParameterError(f"unknown check {check_id!r}")
    missing = [name for name in spec.params if name not in ranges]
    if missing:
        raise ParameterError(f"{check_id} needs values for {', '.join(missing)}")
    axes = [list(ranges[name]) for name in spec.params]
    cases = []
    for combo in itertools.product(*axes):
        case = CheckCase(check_id, dict(zip(spec.params, combo)))
        if is_valid(case):
            cases.append(case)
    return cases


def _evaluate_in_worker(case: CheckCase):
    before = len(sequences.CACHE)
    outcome = evaluate_safely(case)
    fresh = sequences.CACHE.items() if len(sequences.CACHE) != before else []
    return outcome, fresh


def _seed_worker(entries):
    sequences.CACHE.load(entries)


def run_suite(cases: Iterable[CheckCase], jobs: int = 1) -> list[CheckOutcome]:
    """Evaluate cases in input order; errors become error-noted outcomes."""
    cases = list(cases)
    if jobs <= 1 or len(cases) < 2:
        return [evaluate_safely(c) for c in cases]
    chunk = max(1, len(cases) // (jobs * 4))
    outcomes = []
    with ProcessPoolExecutor(jobs, initializer=_seed_worker,
                             initargs=(sequences.CACHE.items(),)) as pool:
        for outcome, fresh in pool.map(_evaluate_in_worker, cases, chunksize=chunk):
            outcomes.append(outcome)
            for key, value in fresh:
                sequences.CACHE.put(key, value)
    return outcomes


def _primes(lo, hi):
    return [q for q in range(lo, hi + 1) if _pok(q)]


def acceptance_cases() -> list[CheckCase]:
    """The default sweep: every statement over its desk-scale grid."""
    r_axis = range(0, 13)
    out: list[CheckCase] = []
    out += grid_cases("MAIN_SUPERCONGRUENCE", p=[5, 7, 11, 13], n=range(1, 13))
    out += grid_cases("THM31_VANISH", p=[7, 11, 13], i=range(1, 5), n=range(1, 9))
    out += grid_cases("REDUCTION", p=[5, 7], m=range(0, 4), n=range(1, 9))
    out += grid_cases("IDH", n=range(1, 51))
    for y in (Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(5), Fraction(-1, 2)):
        out += grid_cases("MORT", n=range(1, 13), y_num=[y.numerator], y_den=[y.denominator])
    out += grid_cases("LEMMA23", p=_primes(5, 31), k=range(0, 11))
    out += grid_cases("COR24", p=_primes(5, 31), i=range(1, 6))
    out += grid_cases("GESSEL", p=_primes(5, 31), j=range(1, 31))
    out += grid_cases("LUCAS", p=[5, 7], b=range(0, 4), c=range(0, 7), d=range(0, 4), e=range(0, 7))
    toolbox = dict(p=[5, 7, 11], m=range(0, 4), r=r_axis)
    for check_id in ("LEMMA51_L1A", "LEMMA51_L1B"):
        out += grid_cases(check_id, p=[5, 7, 11], a=range(1, 6), b=range(0, 5), j=range(1, 11))
    out += grid_cases("LEMMA51_L2", n=range(1, 6), **toolbox)
    out += grid_cases("LEMMA51_L3", **toolbox)
    out += grid_cases("LEMMA51_L4", **toolbox)
    out += grid_cases("COR52", A=[3], **toolbox)
    out += grid_cases("COR54", n=range(1, 6), **toolbox)
    out += grid_cases("LEMMA51_L5", n=range(1, 6), **toolbox)
    out += grid_cases("LEMMA51_L5V2", n=range(1, 6), **toolbox)
    out += grid_cases("COR55", n=range(1, 6), **toolbox)
    for check_id in ("SAGAN26", "SAGAN27"):
        out += grid_cases(check_id, p=[5, 7], n1=range(0, 4), n0=range(0, 7),
                          k1=range(0, 4), k0=range(0, 7))
    out += grid_cases("COR52", p=[5, 7], m=range(0, 3), r=range(0, 7), A=[2, 3, 4, 5])
    for check_id in ("T1", "T2", "T3"):
        out += grid_cases(check_id, p=_primes(5, 31))
    out += grid_cases("CLOSECONG", p=[5, 7], m=range(0, 3), n=range(1, 8))
    out += grid_cases("D_IDENTITIES", p=[5, 7, 11, 13])
    out += grid_cases("E_SUM", p=[5, 7, 11, 13])
    out += grid_cases("DECOMPOSITION", i=range(1, 4), n=range(1, 11))
    out += grid_cases("B1_CHAIN", p=[5, 7], n=range(1, 6), m=range(0, 2))
    out += grid_cases("CONJ71", p=[5, 7], i=[1, 2], n=range(1, 6))
    out += grid_cases("HIGHER", p=[5], r=[2], n=[1, 2])
    return dedupe(out)


def dedupe(cases: Iterable[CheckCase]) -> list[CheckCase]:
    seen = set()
    out = []
    for case in cases:
        if case.key() not in seen:
            seen.add(case.key())
            out.append(case)
    return out


__all__ = [
    "CheckCase",
    "CheckOutcome",
    "ParameterError",
    "REGISTRY",
    "acceptance_cases",
    "evaluate",
    "grid_cases",
    "is_conjectural",
    "run_suite",
]
