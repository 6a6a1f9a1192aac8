"""Closed-form first-register measurement distribution for power-of-two orders.

For order r and n readout qubits the outcome probability is

    prob(x) = sin^2(pi r x A / 2^n) / (2^n A sin^2(pi r x / 2^n)),

where A counts the first-register values sharing one oracle output.  When
r divides 2^n exactly (always true in the Fermat-product family), A is
exactly 2^n / r, the distribution collapses onto the r multiples of
2^(n - log2 r) with weight 1/r each, and these formulas provide an oracle
entirely independent of the statevector simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AnalyticDistribution",
    "analytic_distribution",
    "peak_positions",
    "prob_x",
]


@dataclass(frozen=True, eq=False)
class AnalyticDistribution:
    """Closed-form outcome distribution for order r on n readout qubits."""

    n: int
    r: int
    A: int
    probabilities: np.ndarray = field(repr=False)


def _check_power_of_two_order(r: int, n: int) -> int:
    """Validate r = 2^l with l <= n; returns l."""
    if r < 1 or r & (r - 1):
        raise ValueError(f"order must be a power of two, got r={r}")
    l = r.bit_length() - 1
    if l > n:
        raise ValueError(f"order 2^{l} does not fit in {n} qubits")
    return l


def prob_x(x: int, r: int, n: int) -> float:
    """Probability of first-register outcome x for order r on n qubits.

    At the singular points (r*x divisible by 2^n, tested exactly on
    integers, never by float proximity) the formula's limit A/2^n = 1/r
    is returned.
    """
    _check_power_of_two_order(r, n)
    size = 1 << n
    if not 0 <= x < size:
        raise ValueError(f"need 0 <= x < 2^{n}, got {x}")
    A = size // r
    if (r * x) % size == 0:
        return 1.0 / r
    num = math.sin(math.pi * r * x * A / size) ** 2
    den = size * A * math.sin(math.pi * r * x / size) ** 2
    return num / den


def peak_positions(r: int, n: int) -> list[int]:
    """The r outcomes carrying all the probability: j * 2^(n-l), j < r."""
    l = _check_power_of_two_order(r, n)
    step = 1 << (n - l)
    return [j * step for j in range(r)]


def analytic_distribution(r: int, n: int) -> AnalyticDistribution:
    """Full outcome vector: 1/r on each peak, zero elsewhere."""
    _check_power_of_two_order(r, n)
    size = 1 << n
    probs = np.array([prob_x(x, r, n) for x in range(size)])
    return AnalyticDistribution(n=n, r=r, A=size // r, probabilities=probs)
