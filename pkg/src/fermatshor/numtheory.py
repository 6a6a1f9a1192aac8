"""Exact integer arithmetic for products of two distinct Fermat primes.

A composite N = (2^(2^k) + 1)(2^(2^k') + 1) built from two of the five
known Fermat primes has totient phi(N) = 2^(2^k + 2^k'), so the
multiplicative order of every coprime base divides a power of two and is
therefore itself a power of two.  That structural fact is what makes the
compressed order-finding circuits work, and this module both supplies it
and checks it: `multiplicative_order` is a generic group-order algorithm
that never assumes the property, so the power-of-two outcome is observed,
not presupposed.

All scalar arithmetic uses Python's exact integers.  Bulk scans over all
coprime bases are vectorized with int64 arrays; the largest composite in
the family is 16843009 < 2^25, so squares stay far below 2^63.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "EXHAUSTIVE_LIMIT",
    "FERMAT_PRIMES",
    "FermatProduct",
    "Fraction",
    "LMaxResult",
    "as_product",
    "compute_l_max",
    "convergents",
    "coprime_bases",
    "fermat_number",
    "fermat_products",
    "gcd",
    "mod_pow",
    "multiplicative_order",
    "order_exponents",
    "reduce_fraction",
    "totient_bruteforce",
    "totient_semiprime",
]

#: The five known Fermat primes 2^(2^k) + 1, k = 0..4.
FERMAT_PRIMES = (3, 5, 17, 257, 65537)

#: Upper bound for exhaustive scans over all residues below N.
EXHAUSTIVE_LIMIT = 10**7

# Binary gcd from the stdlib; gcd(0, 0) = 0 by convention.
gcd = math.gcd


def mod_pow(a: int, x: int, N: int) -> int:
    """a**x mod N by square-and-multiply, result in [0, N)."""
    if N < 2:
        raise ValueError(f"modulus must be >= 2, got {N}")
    if x < 0:
        raise ValueError(f"exponent must be >= 0, got {x}")
    return pow(a, x, N)


def totient_semiprime(p: int, p2: int) -> int:
    """Euler totient of p*p2 for distinct odd primes: (p-1)(p2-1)."""
    if p == p2:
        raise ValueError("primes must be distinct")
    return (p - 1) * (p2 - 1)


def totient_bruteforce(N: int) -> int:
    """Euler totient by direct count of coprime residues (oracle, O(N))."""
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if N > EXHAUSTIVE_LIMIT:
        raise ValueError(f"N={N} exceeds exhaustive-scan limit {EXHAUSTIVE_LIMIT}")
    arr = np.arange(1, N, dtype=np.int64)
    return int(np.count_nonzero(np.gcd(arr, N) == 1))


@lru_cache(maxsize=None)
def _factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as (prime, multiplicity) pairs."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def multiplicative_order(a: int, N: int, phi: int | None = None) -> int:
    """Smallest r >= 1 with a**r mod N = 1, for 1 < a < N coprime to N.

    Generic algorithm: factor the group order and strip prime factors
    while the power still maps to 1.  When the totient is a power of two
    this degenerates into repeated squaring of a until 1 is reached, but
    nothing here assumes that shape.  Pass ``phi`` when known; otherwise
    it is obtained by the (guarded) brute-force count.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if not 1 < a < N:
        raise ValueError(f"base must satisfy 1 < a < N, got a={a}")
    if math.gcd(a, N) != 1:
        raise ValueError(f"base {a} is not coprime to {N}")
    if phi is None:
        phi = totient_bruteforce(N)
    order = 1
    for q, e in _factorize(phi):
        b = pow(a, phi // q**e, N)
        while b != 1:
            b = pow(b, q, N)
            order *= q
    return order


def fermat_number(k: int) -> int:
    """The k-th Fermat prime 2^(2^k) + 1; only k = 0..4 yield primes."""
    if not 0 <= k <= 4:
        raise ValueError(f"Fermat numbers are prime only for k in [0, 4], got k={k}")
    return FERMAT_PRIMES[k]


@dataclass(frozen=True)
class FermatProduct:
    """A composite N = p * p2 of two distinct Fermat primes.

    ``l_max`` (the exponent of the largest multiplicative order among
    coprime bases) is computed on first access by exhaustive scan and is
    only available when N is within the scan guard; ``l_max_bound`` is
    the always-available upper bound 2^k + 2^k' - 1, which need not be
    attained.
    """

    k: int
    k2: int
    p: int
    p2: int
    N: int
    phi: int
    b: int

    def __post_init__(self) -> None:
        if not (0 <= self.k <= 4 and 0 <= self.k2 <= 4 and self.k != self.k2):
            raise ValueError(f"indices must be distinct in [0, 4], got {self.k}, {self.k2}")
        if self.p != 2 ** (2**self.k) + 1 or self.p2 != 2 ** (2**self.k2) + 1:
            raise ValueError("primes do not match their Fermat indices")
        if self.N != self.p * self.p2:
            raise ValueError(f"N={self.N} != {self.p}*{self.p2}")
        if self.phi != 2 ** (2**self.k + 2**self.k2):
            raise ValueError(f"phi={self.phi} != 2^(2^{self.k}+2^{self.k2})")
        if self.b != self.N.bit_length():
            raise ValueError(f"b={self.b} != ceil(log2 {self.N})")

    @property
    def l_max_bound(self) -> int:
        """Upper bound 2^k + 2^k' - 1 on the largest order exponent."""
        return 2**self.k + 2**self.k2 - 1

    @property
    def l_max_is_exact(self) -> bool:
        """Whether ``l_max`` can be established by exhaustive scan."""
        return self.N <= EXHAUSTIVE_LIMIT

    @property
    def l_max(self) -> int:
        """Exponent of the largest coprime-base order (exhaustive, cached)."""
        return _l_max_exhaustive(self)


class LMaxResult(NamedTuple):
    """Largest order exponent found by a scan; ``exact`` is False for a
    sampled scan, whose value is only a lower bound."""

    value: int
    exact: bool


@lru_cache(maxsize=None)
def _l_max_exhaustive(product: FermatProduct) -> int:
    return compute_l_max(product, mode="exhaustive").value


@lru_cache(maxsize=1)
def fermat_products() -> tuple[FermatProduct, ...]:
    """All ten products of two distinct Fermat primes, ascending by N."""
    prods = []
    for k in range(5):
        for k2 in range(k + 1, 5):
            p, p2 = FERMAT_PRIMES[k], FERMAT_PRIMES[k2]
            N = p * p2
            prods.append(
                FermatProduct(
                    k=k, k2=k2, p=p, p2=p2, N=N,
                    # N odd, so it is never a power of two and
                    # ceil(log2 N) equals the bit length.
                    phi=(p - 1) * (p2 - 1), b=N.bit_length(),
                )
            )
    return tuple(sorted(prods, key=lambda fp: fp.N))


def as_product(value: FermatProduct | int) -> FermatProduct:
    """Coerce an int N to its FermatProduct; reject out-of-family values."""
    if isinstance(value, FermatProduct):
        return value
    for prod in fermat_products():
        if prod.N == value:
            return prod
    raise ValueError(f"{value} is not a product of two distinct Fermat primes")


def coprime_bases(product: FermatProduct | int) -> np.ndarray:
    """All bases 1 < a < N coprime to N, ascending, as an int64 array."""
    prod = as_product(product)
    if prod.N > EXHAUSTIVE_LIMIT:
        raise ValueError(f"N={prod.N} exceeds exhaustive-scan limit {EXHAUSTIVE_LIMIT}")
    arr = np.arange(2, prod.N, dtype=np.int64)
    return arr[(arr % prod.p != 0) & (arr % prod.p2 != 0)]


def order_exponents(N: int, bases, phi: int) -> np.ndarray:
    """log2 of the multiplicative order of each base, by repeated squaring.

    The squaring chain a, a^2, a^4, ... reaches 1 after exactly l steps
    when the order is 2^l, and never when the order has an odd factor;
    entries of the latter kind are returned as -1 (the chain is cut off
    at the 2-adic depth of phi, past which a power-of-two order is
    impossible).
    """
    if not 2 <= N < 2**31:
        raise ValueError(f"modulus {N} outside vectorizable range")
    cur = np.asarray(bases, dtype=np.int64) % N
    if np.any(np.gcd(cur, N) != 1):
        raise ValueError("bases must all be coprime to N")
    depth = (phi & -phi).bit_length() - 1  # 2-adic valuation of phi
    exponents = np.zeros(cur.shape, dtype=np.int64)
    alive = cur != 1
    for _ in range(depth):
        if not alive.any():
            break
        cur[alive] = (cur[alive] * cur[alive]) % N
        exponents[alive] += 1
        alive &= cur != 1
    exponents[cur != 1] = -1
    return exponents


def compute_l_max(
    product: FermatProduct | int,
    mode: str = "exhaustive",
    count: int = 1024,
    seed: int = 0,
) -> LMaxResult:
    """Largest order exponent among coprime bases of a Fermat product.

    ``exhaustive`` scans every base (guarded to N <= 10^7) and is exact;
    ``sampled`` scans ``count`` seeded-random coprime bases and yields a
    lower bound, flagged ``exact=False`` in the result.
    """
    prod = as_product(product)
    if mode == "exhaustive":
        bases = coprime_bases(prod)
    elif mode == "sampled":
        if count < 1:
            raise ValueError(f"need count >= 1, got {count}")
        rng = np.random.default_rng(seed)
        picked: list[np.ndarray] = []
        have = 0
        while have < count:
            draw = rng.integers(2, prod.N, size=2 * (count - have), dtype=np.int64)
            draw = draw[(draw % prod.p != 0) & (draw % prod.p2 != 0)]
            picked.append(draw)
            have += draw.size
        bases = np.concatenate(picked)[:count]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    exps = order_exponents(prod.N, bases, prod.phi)
    if np.any(exps < 0):
        bad = int(bases[int(np.argmax(exps < 0))])
        raise ArithmeticError(
            f"base {bad} of N={prod.N} has an order that is not a power of two"
        )
    return LMaxResult(value=int(exps.max()), exact=(mode == "exhaustive"))


def reduce_fraction(x: int, denom: int) -> Fraction:
    """x/denom in lowest terms; denom must be a power of two and x < denom.

    x = 0 reduces to 0/1 so the degenerate measurement outcome still has
    a well-defined value (callers treat it as a retry).
    """
    if denom <= 0 or denom & (denom - 1):
        raise ValueError(f"denominator must be a power of two, got {denom}")
    if not 0 <= x < denom:
        raise ValueError(f"need 0 <= x < {denom}, got {x}")
    return Fraction(x, denom)


def convergents(x: int, denom: int) -> list[Fraction]:
    """All continued-fraction convergents of x/denom, in order.

    The final convergent is x/denom in lowest terms, so the reduced
    fraction always appears in the list.
    """
    if denom <= 0:
        raise ValueError(f"denominator must be positive, got {denom}")
    if not 0 <= x < denom:
        raise ValueError(f"need 0 <= x < {denom}, got {x}")
    if x == 0:
        return [Fraction(0, 1)]
    coeffs = []
    num, den = x, denom
    while den:
        q, rem = divmod(num, den)
        coeffs.append(q)
        num, den = den, rem
    out = []
    h_prev, h_prev2 = 1, 0
    k_prev, k_prev2 = 0, 1
    for q in coeffs:
        h = q * h_prev + h_prev2
        k = q * k_prev + k_prev2
        out.append(Fraction(h, k))
        h_prev2, h_prev = h_prev, h
        k_prev2, k_prev = k_prev, k
    return out
