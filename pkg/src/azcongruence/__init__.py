"""Exact computation of the Almkvist-Zudilin sequences and verification of
their congruences."""

from azcongruence.exact import (
    binomial,
    factorial,
    harmonic,
    int_pow,
    multinomial_equal,
    trinomial,
)
from azcongruence.padic import (
    INF,
    PadicContext,
    congruent,
    fermat_quotient,
    is_prime,
    reduce_residue,
    vp,
)
from azcongruence.sequences import apery, az_a, az_b, reduction_lhs, reduction_rhs

__version__ = "0.1.0"

__all__ = [
    "INF",
    "PadicContext",
    "apery",
    "az_a",
    "az_b",
    "binomial",
    "congruent",
    "factorial",
    "fermat_quotient",
    "harmonic",
    "int_pow",
    "is_prime",
    "multinomial_equal",
    "reduce_residue",
    "reduction_lhs",
    "reduction_rhs",
    "trinomial",
    "vp",
]
