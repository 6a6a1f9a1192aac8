"""End-to-end factoring runs: base choice, order extraction, post-processing.

A run picks a base, simulates the compressed order-finding circuit,
extracts the order from first-register outcomes by reducing x/2^n to
lowest terms, and converts the order into factors through the usual
gcd(a^(r/2) +- 1, N) step.  Failures are classified, never raised: a base
with a^(r/2) = -1 mod N is a trivial failure of the gcd step, and an
unlucky sample batch that never yields a verifying order is an extraction
failure.  Runs are deterministic for a fixed configuration; sampling uses
NumPy's default PCG64 generator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .numtheory import FermatProduct, as_product, reduce_fraction
from .simulator import (
    _draw,
    build_compressed_circuit,
    build_verification_circuit,
    dephased_cnot_distribution,
    first_register_distribution,
    run_circuit,
)

__all__ = [
    "BaseChoice",
    "CoherenceReport",
    "OrderResult",
    "RunRecord",
    "choose_base",
    "extract_order",
    "factor",
    "postprocess",
    "verify_coherence",
]


@dataclass(frozen=True)
class BaseChoice:
    """A candidate base; ``lucky_divisor`` is set when gcd(a, N) > 1 and
    already factors N without any quantum step."""

    a: int
    lucky_divisor: int | None


@dataclass(frozen=True)
class OrderResult:
    """Outcome of order extraction from a batch of measurement samples."""

    a: int
    samples: tuple[int, ...]
    extracted_r: int | None
    attempts: int
    status: str  # "ok" | "exhausted_retries"


@dataclass(frozen=True)
class RunRecord:
    """One complete factoring attempt with its classified outcome.

    Exactly one of ``factors``, ``failure``, ``lucky_divisor`` is set.
    """

    N: int
    a: int
    seed: int
    order_result: OrderResult | None
    factors: tuple[int, int] | None = None
    failure: str | None = None  # "trivial_minus_one" | "order_extraction_failed"
    lucky_divisor: int | None = None

    @property
    def succeeded(self) -> bool:
        return self.factors is not None or self.lucky_divisor is not None

    def to_dict(self) -> dict:
        """JSON-stable mapping; every key is always present."""
        res = self.order_result
        return {
            "N": self.N,
            "base": self.a,
            "order": None if res is None else res.extracted_r,
            "samples": [] if res is None else list(res.samples),
            "factors": None if self.factors is None else list(self.factors),
            "failure": self.failure,
            "lucky_gcd": self.lucky_divisor,
            "attempts": 0 if res is None else res.attempts,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True, eq=False)
class CoherenceReport:
    """Result of the |+>-input coherence check for one base."""

    N: int
    a: int
    p_zero: float
    passed: bool
    distribution: np.ndarray = field(repr=False)


def choose_base(
    product: FermatProduct | int, seed: int, override: int | None = None
) -> BaseChoice:
    """Seeded-uniform base in (1, N), or the caller's override.

    A base sharing a factor with N short-circuits into a lucky divisor.
    """
    prod = as_product(product)
    if override is not None:
        a = override
        if not 1 < a < prod.N:
            raise ValueError(f"base must satisfy 1 < a < N, got a={a}")
    else:
        a = int(np.random.default_rng(seed).integers(2, prod.N))
    g = math.gcd(a, prod.N)
    return BaseChoice(a=a, lucky_divisor=g if g > 1 else None)


def extract_order(samples, n: int, a: int, N: int) -> OrderResult:
    """Order candidates from measurement outcomes x by reducing x/2^n.

    Each nonzero sample proposes the denominator of x/2^n in lowest
    terms; the first proposal that verifies a^r mod N = 1 wins.  Rejected
    proposals accumulate into their least common multiple, which rescues
    the case where x/2^n shared a factor with the order, so two bad
    samples often still identify r.  x = 0 carries no information and is
    skipped.
    """
    samples = tuple(int(x) for x in samples)
    denom = 1 << n
    lcm_acc = 1
    for x in samples:
        if x == 0:
            continue
        candidate = reduce_fraction(x, denom).denominator
        if pow(a, candidate, N) == 1:
            return OrderResult(a=a, samples=samples, extracted_r=candidate,
                               attempts=1, status="ok")
        lcm_acc = math.lcm(lcm_acc, candidate)
        if lcm_acc != candidate and pow(a, lcm_acc, N) == 1:
            return OrderResult(a=a, samples=samples, extracted_r=lcm_acc,
                               attempts=1, status="ok")
    return OrderResult(a=a, samples=samples, extracted_r=None,
                       attempts=1, status="exhausted_retries")


def postprocess(
    product: FermatProduct | int, a: int, r: int
) -> tuple[int, int] | None:
    """Factors from a verified even order, or None when a^(r/2) = -1 mod N.

    None is the classified trivial failure: both gcds would collapse to
    1 and N.  Anything else inconsistent (odd or unverified r, degenerate
    gcds) is a contract violation and raises.
    """
    prod = as_product(product)
    if r < 2 or r % 2:
        raise ValueError(f"order must be even, got r={r}")
    if pow(a, r, prod.N) != 1:
        raise ValueError(f"r={r} does not satisfy a^r = 1 mod N for a={a}")
    s = pow(a, r // 2, prod.N)
    if s == prod.N - 1:
        return None
    f1, f2 = math.gcd(s - 1, prod.N), math.gcd(s + 1, prod.N)
    if min(f1, f2) <= 1 or f1 * f2 != prod.N:
        raise ValueError(f"degenerate gcd split ({f1}, {f2}) from s={s}")
    return f1, f2


def factor(
    product: FermatProduct | int,
    seed: int = 0,
    shots: int = 16,
    max_attempts: int = 32,
    mode: str = "exact",
    base_override: int | None = None,
) -> RunRecord:
    """One full factoring run on the compressed circuit.

    ``exact`` mode reads the largest nonzero-probability outcome straight
    from the enumerated distribution (reproducible, no sampling);
    ``sampled`` mode draws ``shots`` outcomes per attempt, up to
    ``max_attempts`` batches, modeling the repeated experiment.
    """
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    prod = as_product(product)
    choice = choose_base(prod, seed, base_override)
    if choice.lucky_divisor is not None:
        return RunRecord(N=prod.N, a=choice.a, seed=seed, order_result=None,
                         lucky_divisor=choice.lucky_divisor)
    a = choice.a

    circuit = build_compressed_circuit(prod, a)
    n = circuit.layout.n
    dist = first_register_distribution(run_circuit(circuit))

    if mode == "exact":
        x_peak = int(np.flatnonzero(dist > 1e-9).max())
        result = extract_order([x_peak], n, a, prod.N)
    else:
        rng = np.random.default_rng(seed)
        seen: list[int] = []
        result = None
        for attempt in range(1, max_attempts + 1):
            batch = _draw(dist, rng, shots)
            seen.extend(int(x) for x in batch)
            got = extract_order(batch, n, a, prod.N)
            if got.status == "ok":
                result = replace(got, samples=tuple(seen), attempts=attempt)
                break
        if result is None:
            result = OrderResult(a=a, samples=tuple(seen), extracted_r=None,
                                 attempts=max_attempts, status="exhausted_retries")

    if result.status != "ok":
        return RunRecord(N=prod.N, a=a, seed=seed, order_result=result,
                         failure="order_extraction_failed")
    factors = postprocess(prod, a, result.extracted_r)
    if factors is None:
        return RunRecord(N=prod.N, a=a, seed=seed, order_result=result,
                         failure="trivial_minus_one")
    return RunRecord(N=prod.N, a=a, seed=seed, order_result=result, factors=factors)


def verify_coherence(
    product: FermatProduct | int, a: int, decohere: bool = False
) -> CoherenceReport:
    """Run the |+>-input circuit and report P(first register = 0).

    With ideal CNOTs the compressed oracle acts as the identity on |+>
    inputs and p_zero is exactly 1.  With ``decohere`` set, every CNOT
    fully dephases its control instead, the all-zeros signature drops to
    1/r, and the report fails.
    """
    prod = as_product(product)
    circuit = build_verification_circuit(prod, a)
    if decohere:
        dist = dephased_cnot_distribution(circuit)
    else:
        dist = first_register_distribution(run_circuit(circuit))
    p_zero = float(dist[0])
    return CoherenceReport(N=prod.N, a=a, p_zero=p_zero,
                           passed=abs(p_zero - 1.0) < 1e-10, distribution=dist)
