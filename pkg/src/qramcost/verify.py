"""Functional oracles: permutation and statevector simulation, query checks,
decomposition unitary checks, and formula-vs-builder comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ir import CLASSICAL, Circuit, CircuitError, Gate

STATEVectorCAP = 20

_SQ = 1.0 / math.sqrt(2.0)
_MATS = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQ,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
}


def simulate_classical(circuit: Circuit, input_bits: int) -> int:
    """Run a circuit of classical gates on a basis state.

    Bits are packed little-endian in qubit index: bit q of the integer is
    qubit q's value.  Raises on non-classical gates.
    """
    state = input_bits
    for g in circuit.gates:
        if g.kind not in CLASSICAL:
            raise CircuitError(f"non-classical gate {g.kind}")
        if g.kind == "X":
            state ^= 1 << g.qubits[0]
        elif g.kind == "CNOT":
            c, t = g.qubits
            if state >> c & 1:
                state ^= 1 << t
        elif g.kind == "SWAP":
            a, b = g.qubits
            if (state >> a & 1) != (state >> b & 1):
                state ^= (1 << a) | (1 << b)
        elif g.kind == "TOFFOLI":
            c1, c2, t = g.qubits
            if (state >> c1 & 1) and (state >> c2 & 1):
                state ^= 1 << t
        else:  # MPMCT
            fire = True
            for q, pos in zip(g.controls, g.polarity):
                if (state >> q & 1) != int(pos):
                    fire = False
                    break
            if fire:
                state ^= 1 << g.target
    return state


def bits_to_index(bits: str) -> int:
    """Map a bit string (qubit 0 first) to the packed integer."""
    return sum(1 << i for i, b in enumerate(bits) if b == "1")


def index_to_bits(index: int, n: int) -> str:
    return "".join("1" if index >> i & 1 else "0" for i in range(n))


def _apply_gate(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    psi = state.reshape([2] * n)
    if g.kind in _MATS:
        q = g.qubits[0]
        psi = np.moveaxis(psi, q, 0)
        psi = np.tensordot(_MATS[g.kind], psi, axes=([1], [0]))
        psi = np.moveaxis(psi, 0, q)
        return psi.reshape(-1)

    def idx(assign: dict[int, int]) -> tuple:
        sl: list = [slice(None)] * n
        for q, v in assign.items():
            sl[q] = v
        return tuple(sl)

    new = psi.copy()
    if g.kind == "CNOT":
        c, t = g.qubits
        new[idx({c: 1, t: 0})] = psi[idx({c: 1, t: 1})]
        new[idx({c: 1, t: 1})] = psi[idx({c: 1, t: 0})]
    elif g.kind == "SWAP":
        a, b = g.qubits
        new[idx({a: 0, b: 1})] = psi[idx({a: 1, b: 0})]
        new[idx({a: 1, b: 0})] = psi[idx({a: 0, b: 1})]
    elif g.kind == "TOFFOLI":
        c1, c2, t = g.qubits
        new[idx({c1: 1, c2: 1, t: 0})] = psi[idx({c1: 1, c2: 1, t: 1})]
        new[idx({c1: 1, c2: 1, t: 1})] = psi[idx({c1: 1, c2: 1, t: 0})]
    else:  # MPMCT
        assign = {q: int(pos) for q, pos in zip(g.controls, g.polarity)}
        a0 = dict(assign, **{g.target: 0})
        a1 = dict(assign, **{g.target: 1})
        new[idx(a0)] = psi[idx(a1)]
        new[idx(a1)] = psi[idx(a0)]
    return new.reshape(-1)


def simulate_state(circuit: Circuit, initial: np.ndarray) -> np.ndarray:
    """Dense statevector simulation; qubit count capped at 20."""
    n = circuit.n_qubits
    if n > STATEVectorCAP:
        raise CircuitError(f"state too large: {n} qubits > {STATEVectorCAP}")
    state = np.asarray(initial, dtype=complex)
    if state.shape != (2 ** n,):
        raise CircuitError("initial state has wrong dimension")
    for g in circuit.gates:
        state = _apply_gate(state, g, n)
    return state


def basis_state(n: int, index: int) -> np.ndarray:
    v = np.zeros(2 ** n, dtype=complex)
    v[index] = 1.0
    return v


# NOTE on index order: simulate_state uses numpy axis 0 for qubit 0, i.e. the
# amplitude of |b_0 b_1 ... b_{n-1}> sits at flat index b_0*2^{n-1} + ... .
# basis_index converts the little-endian packed integer used by
# simulate_classical into that flat index.

def basis_index(packed: int, n: int) -> int:
    flat = 0
    for q in range(n):
        if packed >> q & 1:
            flat |= 1 << (n - 1 - q)
    return flat


@dataclass(frozen=True)
class UnitaryCheck:
    max_deviation: float
    global_phase: complex


def ideal_mpmct_permutation(controls: tuple[int, ...], target: int,
                            polarity: tuple[bool, ...], n: int, packed: int) -> int:
    fire = all((packed >> q & 1) == int(pos)
               for q, pos in zip(controls, polarity))
    return packed ^ (1 << target) if fire else packed


def check_decomposition_unitary(lowered: Circuit, controls: tuple[int, ...],
                                target: int,
                                polarity: tuple[bool, ...] | None = None,
                                ancillae: tuple[int, ...] = ()) -> UnitaryCheck:
    """Max deviation of the lowered fragment from the ideal gate.

    Compares the action on every basis state with ancillae cleared (the
    fragment contract requires ancillae in |0>), up to one global phase.
    """
    n = lowered.n_qubits
    if n > 13:
        raise CircuitError("unitary check capped at 13 qubits")
    if polarity is None:
        polarity = tuple(True for _ in controls)
    data = [q for q in range(n) if q not in ancillae]
    phase = None
    worst = 0.0
    for packed_data in range(2 ** len(data)):
        packed = 0
        for i, q in enumerate(data):
            if packed_data >> i & 1:
                packed |= 1 << q
        out = simulate_state(lowered, basis_state(n, basis_index(packed, n)))
        expect_packed = ideal_mpmct_permutation(controls, target, polarity, n, packed)
        expect_flat = basis_index(expect_packed, n)
        amp = out[expect_flat]
        if abs(amp) < 1e-6:
            return UnitaryCheck(1.0, 1.0)
        if phase is None:
            phase = amp / abs(amp)
        ideal = np.zeros_like(out)
        ideal[expect_flat] = phase
        worst = max(worst, float(np.max(np.abs(out - ideal))))
    return UnitaryCheck(worst, phase if phase is not None else 1.0)


def check_unitary_dense(lowered: Circuit, ideal: np.ndarray,
                        ancillae: tuple[int, ...] = ()) -> float:
    """Max deviation |U_lowered - ideal| on the cleared-ancilla block, up to
    global phase; `ideal` acts on the non-ancilla qubits in index order."""
    n = lowered.n_qubits
    data = [q for q in range(n) if q not in ancillae]
    m = len(data)
    if ideal.shape != (2 ** m, 2 ** m):
        raise CircuitError("ideal unitary has wrong dimension")
    cols = []
    for packed_data in range(2 ** m):
        packed = 0
        for i, q in enumerate(data):
            if packed_data >> i & 1:
                packed |= 1 << q
        out = simulate_state(lowered, basis_state(n, basis_index(packed, n)))
        cols.append(out)
    worst = 0.0
    phase = None
    for col_in in range(2 ** m):
        out = cols[col_in]
        # fold ancilla axes: ancillae must come back to 0
        expected = np.zeros(2 ** n, dtype=complex)
        for row in range(2 ** m):
            packed = 0
            for i, q in enumerate(data):
                if row >> i & 1:
                    packed |= 1 << q
            col_bits_in = sum(((col_in >> i) & 1) << i for i in range(m))
            expected[basis_index(packed, n)] = ideal[row, col_bits_in]
        if phase is None:
            k = int(np.argmax(np.abs(expected)))
            if abs(out[k]) < 1e-9:
                return 1.0
            phase = out[k] / expected[k]
            phase /= abs(phase)
        worst = max(worst, float(np.max(np.abs(out - phase * expected))))
    return worst
