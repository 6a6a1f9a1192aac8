"""Classical pre-processing that shrinks the modular-exponentiation register.

For a base a of order r modulo N, the r distinct values of a^x mod N are
relabeled through the bijection a^x mod N -> x mod r.  Under that
relabeling the whole modular-exponentiation unitary collapses to copying
the log2(r) least-significant qubits of the input register, so only one
circuit per order is ever needed; this module builds the relabeling and
assigns every coprime base its circuit class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numtheory import (
    EXHAUSTIVE_LIMIT,
    FermatProduct,
    as_product,
    coprime_bases,
    mod_pow,
    multiplicative_order,
    order_exponents,
)

__all__ = [
    "CircuitClass",
    "CompressionMap",
    "build_compression_map",
    "circuit_class",
    "is_trivial_failure_base",
    "table_assignments",
    "trivial_failure_bases",
]

#: Display letters for the four circuit classes of the 8-qubit composites.
FIGURE_LABELS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class CompressionMap:
    """Power table of a base together with the relabeling it induces.

    ``power_table[x]`` is a^x mod N for x in [0, r); reading it backwards
    (value -> position) is the compression bijection onto {0, ..., r-1}.
    """

    N: int
    a: int
    r: int
    l: int
    power_table: tuple[int, ...]

    def compressed_value(self, value: int) -> int:
        """Position of a second-register value under the relabeling."""
        return self.power_table.index(value)


@dataclass(frozen=True)
class CircuitClass:
    """Circuit family for an order 2^l: l copy-CNOTs in the oracle block.

    ``figure_label`` is display-only and defined for l = 1..4, the four
    classes that cover every base of N = 51 and N = 85.
    """

    l: int
    figure_label: str | None


def build_compression_map(product: FermatProduct | int, a: int) -> CompressionMap:
    """Tabulate a^x mod N for one period and wrap it as a CompressionMap."""
    prod = as_product(product)
    if not 1 < a < prod.N:
        raise ValueError(f"base must satisfy 1 < a < N, got a={a}")
    if math.gcd(a, prod.N) != 1:
        raise ValueError(f"base {a} is not coprime to {prod.N}")
    table = [1]
    cur = a % prod.N
    while cur != 1:
        table.append(cur)
        cur = (cur * a) % prod.N
    r = len(table)
    l = r.bit_length() - 1
    if 2**l != r:
        raise ArithmeticError(f"order {r} of base {a} mod {prod.N} is not a power of two")
    # Iterated multiplication and the generic order algorithm must agree.
    assert r == multiplicative_order(a, prod.N, phi=prod.phi)
    return CompressionMap(N=prod.N, a=a, r=r, l=l, power_table=tuple(table))


def circuit_class(cmap: CompressionMap) -> CircuitClass:
    """Circuit class of a base: l = log2(r), lettered for l = 1..4."""
    l = cmap.l
    label = FIGURE_LABELS[l - 1] if 1 <= l <= len(FIGURE_LABELS) else None
    return CircuitClass(l=l, figure_label=label)


def table_assignments(product: FermatProduct | int) -> dict[int, list[int]]:
    """Every coprime base of N bucketed by its order exponent l.

    Bucket lists are ascending; the bucket sizes sum to phi(N) - 1 since
    each base 1 < a < N coprime to N lands in exactly one bucket.
    """
    prod = as_product(product)
    if prod.N > EXHAUSTIVE_LIMIT:
        raise ValueError(f"N={prod.N} exceeds exhaustive-scan limit {EXHAUSTIVE_LIMIT}")
    bases = coprime_bases(prod)
    exps = order_exponents(prod.N, bases, prod.phi)
    if np.any(exps < 0):
        bad = int(bases[int(np.argmax(exps < 0))])
        raise ArithmeticError(f"base {bad} of N={prod.N} has a non-power-of-two order")
    return {
        int(l): [int(a) for a in bases[exps == l]]
        for l in np.unique(exps)
    }


def trivial_failure_bases(product: FermatProduct | int) -> list[int]:
    """All coprime bases with a^(r/2) = -1 mod N, ascending.

    Vectorized companion of `is_trivial_failure_base`: within the bucket
    of order 2^l, a^(r/2) is the (l-1)-th repeated square of a.
    """
    prod = as_product(product)
    bases = coprime_bases(prod)
    exps = order_exponents(prod.N, bases, prod.phi)
    out: list[int] = []
    for l in np.unique(exps):
        sub = bases[exps == l]
        cur = sub.copy()
        for _ in range(int(l) - 1):
            cur = (cur * cur) % prod.N
        out.extend(int(a) for a in sub[cur == prod.N - 1])
    return sorted(out)


def is_trivial_failure_base(product: FermatProduct | int, a: int) -> bool:
    """Whether a^(r/2) = -1 mod N, which dooms the gcd post-processing.

    Orders in this family are even for every base (a != 1 means r >= 2,
    and r is a power of two), so r/2 is always defined.
    """
    prod = as_product(product)
    if not 1 < a < prod.N:
        raise ValueError(f"base must satisfy 1 < a < N, got a={a}")
    if math.gcd(a, prod.N) != 1:
        raise ValueError(f"base {a} is not coprime to {prod.N}")
    r = multiplicative_order(a, prod.N, phi=prod.phi)
    return mod_pow(a, r // 2, prod.N) == prod.N - 1
