"""Dense statevector engine and the order-finding circuit builders.

Register convention: the first register holds n qubits, the second m,
and qubit 1 is the most significant bit of the first register, so the
flat amplitude index of basis state |x>|y> is x * 2^m + y.  Measured
first-register values can therefore be compared directly against the
analytic peak positions without any bit reversal.

The engine is exact (complex128, no truncation) and guarded to 24 qubits
total; every circuit in the Fermat-product family fits well below that.
Gate application is vectorized over amplitude axes and is deterministic
for a fixed gate order.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .numtheory import FermatProduct, as_product, multiplicative_order

__all__ = [
    "MAX_QUBITS",
    "Circuit",
    "Gate",
    "RegisterLayout",
    "StateVector",
    "apply_gate",
    "apply_permutation_oracle",
    "build_compressed_circuit",
    "build_copy_circuit",
    "build_standard_circuit",
    "build_verification_circuit",
    "circuit_from_json",
    "circuit_to_json",
    "cnot",
    "compressed_modexp_gates",
    "cphase",
    "dephased_cnot_distribution",
    "first_register_distribution",
    "hadamard",
    "initial_state",
    "inverse_qft",
    "modexp",
    "pauli_x",
    "run_circuit",
    "sample",
    "swap_gate",
]

MAX_QUBITS = 24

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit counts of the two registers: n readout qubits, m work qubits."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 0:
            raise ValueError(f"need n >= 1 and m >= 0, got n={self.n}, m={self.m}")
        if self.n + self.m > MAX_QUBITS:
            raise ValueError(f"{self.n + self.m} qubits exceed the {MAX_QUBITS}-qubit guard")

    @property
    def total(self) -> int:
        return self.n + self.m

    @property
    def dim(self) -> int:
        return 1 << self.total


@dataclass(frozen=True)
class Gate:
    """One circuit element; ``qubits`` are 1-based global indices.

    ``modexp`` gates carry their (base, modulus) parameters instead of
    qubit indices and act on the full register pair as the permutation
    |x>|y> -> |x>|y * base^x mod modulus> (identity on y >= modulus).
    """

    kind: str
    qubits: tuple[int, ...] = ()
    angle: float | None = None
    base: int | None = None
    modulus: int | None = None


def hadamard(qubit: int) -> Gate:
    return Gate(kind="h", qubits=(qubit,))


def pauli_x(qubit: int) -> Gate:
    return Gate(kind="x", qubits=(qubit,))


def cnot(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError("control and target must differ")
    return Gate(kind="cnot", qubits=(control, target))


def cphase(control: int, target: int, angle: float) -> Gate:
    if control == target:
        raise ValueError("control and target must differ")
    if not -2 * math.pi < angle < 2 * math.pi:
        raise ValueError(f"angle must lie in (-2*pi, 2*pi), got {angle}")
    return Gate(kind="cphase", qubits=(control, target), angle=float(angle))


def swap_gate(qubit1: int, qubit2: int) -> Gate:
    if qubit1 == qubit2:
        raise ValueError("swapped qubits must differ")
    return Gate(kind="swap", qubits=(qubit1, qubit2))


def modexp(base: int, modulus: int) -> Gate:
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if math.gcd(base, modulus) != 1:
        raise ValueError(f"base {base} is not coprime to {modulus}")
    return Gate(kind="modexp", base=int(base), modulus=int(modulus))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a two-register layout with basis-state input.

    Superposition inputs (the |+> verification variant) are expressed as
    Hadamard gates at the front of ``gates``, keeping ``initial_x`` and
    ``initial_y`` strictly computational.
    """

    layout: RegisterLayout
    gates: tuple[Gate, ...]
    initial_x: int = 0
    initial_y: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.initial_x < (1 << self.layout.n):
            raise ValueError(f"initial_x={self.initial_x} outside first register")
        if not 0 <= self.initial_y < max(1 << self.layout.m, 1):
            raise ValueError(f"initial_y={self.initial_y} outside second register")
        for gate in self.gates:
            _validate_gate(gate, self.layout)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Dense complex amplitudes over the 2^(n+m) basis states."""

    layout: RegisterLayout
    amplitudes: np.ndarray

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def _validate_gate(gate: Gate, layout: RegisterLayout) -> None:
    if gate.kind == "modexp":
        if gate.base is None or gate.modulus is None:
            raise ValueError("modexp gate needs base and modulus")
        if (1 << layout.m) < gate.modulus:
            raise ValueError(
                f"second register ({layout.m} qubits) cannot hold residues mod {gate.modulus}"
            )
        return
    if gate.kind not in ("h", "x", "cnot", "cphase", "swap"):
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    for q in gate.qubits:
        if not 1 <= q <= layout.total:
            raise ValueError(f"qubit {q} out of range for {layout.total}-qubit layout")
    if len(set(gate.qubits)) != len(gate.qubits):
        raise ValueError(f"gate qubits must be distinct, got {gate.qubits}")
    if gate.kind == "cphase" and gate.angle is None:
        raise ValueError("cphase gate needs an angle")


def initial_state(circuit: Circuit) -> StateVector:
    """The circuit's basis input |initial_x>|initial_y> as a statevector."""
    lay = circuit.layout
    amps = np.zeros(lay.dim, dtype=complex)
    amps[(circuit.initial_x << lay.m) | circuit.initial_y] = 1.0
    return StateVector(layout=lay, amplitudes=amps)


def _apply_1q(amps: np.ndarray, nq: int, qubit: int, mat: np.ndarray) -> np.ndarray:
    psi = np.moveaxis(amps.reshape([2] * nq), qubit - 1, -1)
    out = psi @ mat.T
    return np.moveaxis(out, -1, qubit - 1).reshape(-1)


def _block_index(nq: int, assignments: dict[int, int]) -> tuple:
    idx: list = [slice(None)] * nq
    for qubit, value in assignments.items():
        idx[qubit - 1] = value
    return tuple(idx)


def _apply_cnot(amps: np.ndarray, nq: int, control: int, target: int) -> np.ndarray:
    psi = amps.reshape([2] * nq).copy()
    i10 = _block_index(nq, {control: 1, target: 0})
    i11 = _block_index(nq, {control: 1, target: 1})
    tmp = psi[i10].copy()
    psi[i10] = psi[i11]
    psi[i11] = tmp
    return psi.reshape(-1)


def _apply_cphase(amps: np.ndarray, nq: int, control: int, target: int, angle: float) -> np.ndarray:
    psi = amps.reshape([2] * nq).copy()
    i11 = _block_index(nq, {control: 1, target: 1})
    psi[i11] = psi[i11] * np.exp(1j * angle)
    return psi.reshape(-1)


def _apply_swap(amps: np.ndarray, nq: int, qubit1: int, qubit2: int) -> np.ndarray:
    psi = amps.reshape([2] * nq).copy()
    i01 = _block_index(nq, {qubit1: 0, qubit2: 1})
    i10 = _block_index(nq, {qubit1: 1, qubit2: 0})
    tmp = psi[i01].copy()
    psi[i01] = psi[i10]
    psi[i10] = tmp
    return psi.reshape(-1)


def _apply_z(amps: np.ndarray, nq: int, qubit: int) -> np.ndarray:
    # Internal only (dephasing mixture); not part of the public gate set.
    psi = amps.reshape([2] * nq).copy()
    i1 = _block_index(nq, {qubit: 1})
    psi[i1] = -psi[i1]
    return psi.reshape(-1)


def _permute(state: StateVector, dest: np.ndarray) -> StateVector:
    counts = np.bincount(dest, minlength=state.layout.dim)
    if dest.size != state.layout.dim or np.any(counts != 1):
        raise ValueError("permutation table is not a bijection on the basis states")
    out = np.empty_like(state.amplitudes)
    out[dest] = state.amplitudes
    return StateVector(layout=state.layout, amplitudes=out)


def _modexp_dest(layout: RegisterLayout, base: int, modulus: int) -> np.ndarray:
    size_y = 1 << layout.m
    ys = np.arange(size_y, dtype=np.int64)
    in_range = ys < modulus
    dest = np.empty(layout.dim, dtype=np.int64)
    for x in range(1 << layout.n):
        mult = pow(base, x, modulus)
        fy = np.where(in_range, (ys * mult) % modulus, ys)
        dest[(x << layout.m) + ys] = (x << layout.m) + fy
    return dest


def apply_permutation_oracle(state: StateVector, f) -> StateVector:
    """Move the amplitude at (x, y) to (x, f(x, y)).

    ``f`` must be a bijection on second-register values for every fixed
    first-register value x; the table is rejected otherwise.
    """
    lay = state.layout
    ys = np.arange(1 << lay.m, dtype=np.int64)
    dest = np.empty(lay.dim, dtype=np.int64)
    for x in range(1 << lay.n):
        fy = np.fromiter((f(x, int(y)) for y in ys), dtype=np.int64, count=ys.size)
        dest[(x << lay.m) + ys] = (x << lay.m) + fy
    return _permute(state, dest)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Exact unitary action of one gate; returns a fresh statevector."""
    lay = state.layout
    _validate_gate(gate, lay)
    nq = lay.total
    amps = state.amplitudes
    if gate.kind == "h":
        new = _apply_1q(amps, nq, gate.qubits[0], _H)
    elif gate.kind == "x":
        new = _apply_1q(amps, nq, gate.qubits[0], _X)
    elif gate.kind == "cnot":
        new = _apply_cnot(amps, nq, *gate.qubits)
    elif gate.kind == "cphase":
        new = _apply_cphase(amps, nq, *gate.qubits, gate.angle)
    elif gate.kind == "swap":
        new = _apply_swap(amps, nq, *gate.qubits)
    elif gate.kind == "modexp":
        return _permute(state, _modexp_dest(lay, gate.base, gate.modulus))
    else:  # pragma: no cover - _validate_gate already rejects
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    return StateVector(layout=lay, amplitudes=new)


def run_circuit(circuit: Circuit) -> StateVector:
    """Apply all gates to the circuit's initial state, checking unitarity."""
    state = initial_state(circuit)
    for gate in circuit.gates:
        state = apply_gate(state, gate)
    if abs(state.norm_squared - 1.0) > 1e-12:
        raise ArithmeticError(f"norm drifted to {state.norm_squared}")
    return state


def first_register_distribution(state: StateVector) -> np.ndarray:
    """Marginal measurement distribution of the first register."""
    lay = state.layout
    probs = np.abs(state.amplitudes) ** 2
    return probs.reshape(1 << lay.n, 1 << lay.m).sum(axis=1)


def sample(dist, seed: int, shots: int) -> np.ndarray:
    """Draw ``shots`` outcomes by inverse-CDF sampling.

    Deterministic for a fixed seed; the generator is NumPy's default
    PCG64 stream (``numpy.random.default_rng``).
    """
    dist = np.asarray(dist, dtype=float)
    if dist.ndim != 1 or dist.size == 0:
        raise ValueError("distribution must be a non-empty 1-d vector")
    if np.any(dist < -1e-12) or abs(float(dist.sum()) - 1.0) > 1e-9:
        raise ValueError("distribution entries must be non-negative and sum to 1")
    return _draw(dist, np.random.default_rng(seed), shots)


def _draw(dist: np.ndarray, rng: np.random.Generator, shots: int) -> np.ndarray:
    cum = np.cumsum(dist)
    cum[-1] = 1.0  # close the CDF against rounding
    return np.searchsorted(cum, rng.random(shots), side="right").astype(np.int64)


def inverse_qft(n: int) -> tuple[Gate, ...]:
    """Inverse Fourier transform on qubits 1..n as an explicit gate list.

    Per qubit, controlled phases of angle -pi/2^d to each earlier qubit
    (d = index distance) followed by a Hadamard; a closing layer of swaps
    restores most-significant-first bit order so measured values need no
    reversal.  Total: n(n+1)/2 phase/Hadamard gates plus floor(n/2) swaps.
    """
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"need 1 <= n <= {MAX_QUBITS}, got {n}")
    gates: list[Gate] = []
    for i in range(1, n + 1):
        for j in range(1, i):
            gates.append(cphase(j, i, -math.pi / 2 ** (i - j)))
        gates.append(hadamard(i))
    for j in range(1, n // 2 + 1):
        gates.append(swap_gate(j, n + 1 - j))
    return tuple(gates)


def compressed_modexp_gates(n: int, m: int, l: int) -> tuple[Gate, ...]:
    """The compressed oracle block: l CNOTs copying the l least-significant
    first-register qubits onto the matching second-register qubits, which
    realizes |x>|0..0> -> |x>|x mod 2^l>."""
    if not 0 <= l <= min(n, m):
        raise ValueError(f"need 0 <= l <= min(n, m), got l={l}")
    return tuple(cnot(n - l + 1 + t, n + m - l + 1 + t) for t in range(l))


def build_standard_circuit(product: FermatProduct | int, a: int, n: int, m: int) -> Circuit:
    """Textbook order-finding circuit: Hadamards, modular-exponentiation
    oracle on a second register initialized to 1, inverse QFT."""
    prod = as_product(product)
    if math.gcd(a, prod.N) != 1 or not 1 < a < prod.N:
        raise ValueError(f"base must be coprime and 1 < a < N, got a={a}")
    if (1 << m) < prod.N:
        raise ValueError(f"need 2^m >= N, got m={m} for N={prod.N}")
    lay = RegisterLayout(n=n, m=m)
    gates = [hadamard(i) for i in range(1, n + 1)]
    gates.append(modexp(a, prod.N))
    gates.extend(inverse_qft(n))
    return Circuit(layout=lay, gates=tuple(gates), initial_x=0, initial_y=1)


def build_compressed_circuit(product: FermatProduct | int, a: int) -> Circuit:
    """Compressed order-finding circuit: both registers sized l_max, the
    oracle reduced to log2(r) parallel CNOTs, second register all zeros."""
    prod = as_product(product)
    if math.gcd(a, prod.N) != 1 or not 1 < a < prod.N:
        raise ValueError(f"base must be coprime and 1 < a < N, got a={a}")
    r = multiplicative_order(a, prod.N, phi=prod.phi)
    l = r.bit_length() - 1
    n = m = prod.l_max
    gates = [hadamard(i) for i in range(1, n + 1)]
    gates.extend(compressed_modexp_gates(n, m, l))
    gates.extend(inverse_qft(n))
    return Circuit(layout=RegisterLayout(n=n, m=m), gates=tuple(gates))


def build_copy_circuit(n: int) -> Circuit:
    """Bitwise copy of an n-qubit register onto a second one: n CNOTs."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    gates = tuple(cnot(j, n + j) for j in range(1, n + 1))
    return Circuit(layout=RegisterLayout(n=n, m=n), gates=gates)


def build_verification_circuit(product: FermatProduct | int, a: int) -> Circuit:
    """Compressed circuit with every second-register qubit prepared in |+>.

    Ideal CNOTs then act as the identity, so the first register must read
    all zeros with certainty; any decoherence of the CNOTs breaks that
    signature.  The |+> inputs appear as leading Hadamards.
    """
    base_circuit = build_compressed_circuit(product, a)
    n, m = base_circuit.layout.n, base_circuit.layout.m
    prep = tuple(hadamard(n + j) for j in range(1, m + 1))
    head = tuple(g for g in base_circuit.gates[:n])  # first-register Hadamards
    tail = base_circuit.gates[n:]
    return Circuit(layout=base_circuit.layout, gates=head + prep + tail)


def dephased_cnot_distribution(circuit: Circuit) -> np.ndarray:
    """First-register distribution when every CNOT fully dephases its control.

    The channel rho -> (rho + Z rho Z)/2 on each control is simulated
    exactly as the uniform mixture over all identity/Z insertions, one
    pure-state run per pattern (2^#CNOT branches).
    """
    positions = [i for i, g in enumerate(circuit.gates) if g.kind == "cnot"]
    if len(positions) > 12:
        raise ValueError(f"{len(positions)} CNOTs need too many mixture branches")
    lay = circuit.layout
    acc = np.zeros(1 << lay.n)
    for pattern in itertools.product((0, 1), repeat=len(positions)):
        flips = dict(zip(positions, pattern))
        state = initial_state(circuit)
        for idx, gate in enumerate(circuit.gates):
            state = apply_gate(state, gate)
            if flips.get(idx):
                state = StateVector(
                    layout=lay,
                    amplitudes=_apply_z(state.amplitudes, lay.total, gate.qubits[0]),
                )
        acc += first_register_distribution(state)
    return acc / 2 ** len(positions)


# --------------------------------------------------------------------------
# Gate-list JSON interchange (one gate per line, fixed key order).

def _gate_to_dict(gate: Gate) -> dict:
    if gate.kind in ("h", "x"):
        return {"kind": gate.kind, "qubit": gate.qubits[0]}
    if gate.kind == "cnot":
        return {"kind": "cnot", "control": gate.qubits[0], "target": gate.qubits[1]}
    if gate.kind == "cphase":
        return {
            "kind": "cphase",
            "control": gate.qubits[0],
            "target": gate.qubits[1],
            "angle": gate.angle,
        }
    if gate.kind == "swap":
        return {"kind": "swap", "qubit1": gate.qubits[0], "qubit2": gate.qubits[1]}
    if gate.kind == "modexp":
        return {"kind": "modexp", "base": gate.base, "modulus": gate.modulus}
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def _gate_from_dict(d: dict) -> Gate:
    kind = d["kind"]
    if kind == "h":
        return hadamard(d["qubit"])
    if kind == "x":
        return pauli_x(d["qubit"])
    if kind == "cnot":
        return cnot(d["control"], d["target"])
    if kind == "cphase":
        return cphase(d["control"], d["target"], d["angle"])
    if kind == "swap":
        return swap_gate(d["qubit1"], d["qubit2"])
    if kind == "modexp":
        return modexp(d["base"], d["modulus"])
    raise ValueError(f"unknown gate kind {kind!r}")


def circuit_to_json(circuit: Circuit) -> str:
    """Serialize a circuit as JSON with one gate object per line.

    Field order is fixed so the output is byte-stable for golden files;
    angles are radians rendered as shortest round-trip decimal floats.
    """
    lay = circuit.layout
    xbits = format(circuit.initial_x, f"0{lay.n}b")
    ybits = format(circuit.initial_y, f"0{lay.m}b") if lay.m else ""
    lines = ["{"]
    lines.append(f'  "layout": {{"n": {lay.n}, "m": {lay.m}}},')
    lines.append(f'  "initial": "{xbits}|{ybits}",')
    if circuit.gates:
        lines.append('  "gates": [')
        body = [f"    {json.dumps(_gate_to_dict(g))}" for g in circuit.gates]
        lines.append(",\n".join(body))
        lines.append("  ]")
    else:
        lines.append('  "gates": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def circuit_from_json(text: str) -> Circuit:
    """Rebuild a circuit from its JSON form (inverse of circuit_to_json)."""
    doc = json.loads(text)
    lay = RegisterLayout(n=int(doc["layout"]["n"]), m=int(doc["layout"]["m"]))
    xbits, _, ybits = doc["initial"].partition("|")
    gates = tuple(_gate_from_dict(d) for d in doc["gates"])
    return Circuit(
        layout=lay,
        gates=gates,
        initial_x=int(xbits, 2) if xbits else 0,
        initial_y=int(ybits, 2) if ybits else 0,
    )
