"""Gate and circuit representation, ASAP layering, resource counting, text format.

The gate alphabet is {X, H, S, Sdg, T, Tdg, CNOT, SWAP, TOFFOLI, MPMCT}.
Circuits are immutable once built: an ordered gate list over named registers.
Depth accounting follows the convention that X gates never contribute to
depth or to any gate tally (they are kept for simulation only).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

GATE_KINDS = ("X", "H", "S", "Sdg", "T", "Tdg", "CNOT", "SWAP", "TOFFOLI", "MPMCT")

SINGLE_QUBIT = {"X", "H", "S", "Sdg", "T", "Tdg"}
CLIFFORD_T = {"X", "H", "S", "Sdg", "T", "Tdg", "CNOT", "SWAP"}
CLASSICAL = {"X", "CNOT", "SWAP", "TOFFOLI", "MPMCT"}

REGISTER_ROLES = (
    "address",
    "ancilla",
    "output",
    "parity-register",
    "memory",
    "trigger",
    "copy",
)


class CircuitError(ValueError):
    """Raised for malformed gates, circuits, or circuit text."""


@dataclass(frozen=True)
class Gate:
    """One gate: kind, operand qubits, and (for MPMCT) a control polarity vector.

    Operands are ordered: controls first, target last.  `polarity[i]` is True
    for a positive control on `qubits[i]`, False for a negated one.
    """

    kind: str
    qubits: tuple[int, ...]
    polarity: tuple[bool, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate operand in {self.kind} {self.qubits}")
        arity = {"CNOT": 2, "SWAP": 2, "TOFFOLI": 3}
        if self.kind in SINGLE_QUBIT and len(self.qubits) != 1:
            raise CircuitError(f"{self.kind} takes one qubit")
        if self.kind in arity and len(self.qubits) != arity[self.kind]:
            raise CircuitError(f"{self.kind} takes {arity[self.kind]} qubits")
        if self.kind == "MPMCT":
            if len(self.qubits) < 3:
                raise CircuitError("MPMCT needs at least 2 controls and a target")
            if self.polarity is None or len(self.polarity) != len(self.qubits) - 1:
                raise CircuitError("MPMCT polarity length must equal control count")
        elif self.polarity is not None:
            raise CircuitError(f"{self.kind} does not take a polarity vector")

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in ("CNOT", "TOFFOLI", "MPMCT"):
            return self.qubits[:-1]
        return ()

    @property
    def target(self) -> int:
        return self.qubits[-1]


@dataclass(frozen=True)
class Register:
    name: str
    role: str
    first: int
    last: int  # inclusive

    def __post_init__(self) -> None:
        if self.role not in REGISTER_ROLES:
            raise CircuitError(f"unknown register role {self.role!r}")
        if self.first > self.last:
            raise CircuitError(f"register {self.name}: first > last")

    @property
    def qubits(self) -> range:
        return range(self.first, self.last + 1)

    @property
    def size(self) -> int:
        return self.last - self.first + 1


@dataclass(frozen=True)
class Circuit:
    """A fixed-width circuit: qubit count, registers partitioning the qubits,
    and an ordered gate list."""

    n_qubits: int
    registers: tuple[Register, ...]
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        covered = []
        for reg in self.registers:
            if reg.last >= self.n_qubits:
                raise CircuitError(f"register {reg.name} exceeds qubit count")
            covered.extend(reg.qubits)
        if sorted(covered) != list(range(self.n_qubits)):
            raise CircuitError("registers must partition the qubit range")
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise CircuitError(f"gate {g.kind} {g.qubits} out of range")

    def register(self, name: str) -> Register:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise KeyError(name)

    def registers_by_role(self, role: str) -> list[Register]:
        return [r for r in self.registers if r.role == role]

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n_qubits, self.registers, tuple(gates))


def single_register_circuit(n_qubits: int, gates: Sequence[Gate] = (),
                            role: str = "ancilla", name: str = "q") -> Circuit:
    """A circuit with one register covering all qubits; handy for fragments."""
    return Circuit(n_qubits, (Register(name, role, 0, n_qubits - 1),), tuple(gates))


@dataclass(frozen=True)
class LayeredCircuit:
    """Layers of gates with pairwise-disjoint supports, in dependency order."""

    n_qubits: int
    layers: tuple[tuple[Gate, ...], ...]

    @property
    def n_layers(self) -> int:
        return len(self.layers)


def schedule_asap(circuit: Circuit) -> LayeredCircuit:
    """Place each gate in the earliest layer allowed by qubit-sharing order.

    Two gates depend on each other iff they share a qubit; the gate list
    order is the topological order.  X gates occupy layer slots like any
    other gate (depth accounting excludes them later).
    """
    frontier = [0] * circuit.n_qubits  # last occupied layer per qubit, 0 = none
    layers: list[list[Gate]] = []
    for gate in circuit.gates:
        layer = max(frontier[q] for q in gate.qubits) + 1
        while len(layers) < layer:
            layers.append([])
        layers[layer - 1].append(gate)
        for q in gate.qubits:
            frontier[q] = layer
    return LayeredCircuit(circuit.n_qubits, tuple(tuple(l) for l in layers))


@dataclass(frozen=True)
class ResourceCounts:
    """Logical resource metrics: qubits, depth, T-count/depth, H and CNOT tallies."""

    n_qubits: int
    depth: int
    t_count: int
    t_depth: int
    h_count: int
    cnot_count: int

    def __post_init__(self) -> None:
        for name in ("n_qubits", "depth", "t_count", "t_depth", "h_count", "cnot_count"):
            if getattr(self, name) < 0:
                raise CircuitError(f"{name} must be non-negative")
        if self.t_depth > self.depth:
            raise CircuitError("t_depth exceeds depth")
        if self.t_depth > self.t_count:
            raise CircuitError("t_depth exceeds t_count")

    @property
    def t_width(self) -> Fraction:
        """Average T gates per T layer; zero when there are no T layers."""
        if self.t_depth == 0:
            return Fraction(0)
        return Fraction(self.t_count, self.t_depth)

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.n_qubits, self.depth, self.t_count, self.t_depth,
                self.h_count, self.cnot_count)


def gate_tally(circuit: Circuit) -> dict[str, int]:
    """Count gates by kind (X included; raw, pre-lowering view)."""
    tally: dict[str, int] = {}
    for g in circuit.gates:
        tally[g.kind] = tally.get(g.kind, 0) + 1
    return tally


def count_resources(circuit: Circuit, allow_unlowered: bool = False) -> ResourceCounts:
    """Compute logical resource counts from the ASAP layering.

    X gates are excluded from the depth and from every tally.  SWAP counts
    as 3 CNOTs.  TOFFOLI/MPMCT must be lowered first unless
    `allow_unlowered` is set, in which case they are counted only toward
    depth (opaque blocks, no T/H/CNOT contribution).
    """
    if not allow_unlowered:
        for g in circuit.gates:
            if g.kind in ("TOFFOLI", "MPMCT"):
                raise CircuitError("not lowered: circuit still contains "
                                   f"{g.kind}; lower to Clifford+T first")
    layered = schedule_asap(circuit)
    depth = 0
    t_depth = 0
    t_count = h_count = cnot_count = 0
    for layer in layered.layers:
        kinds = {g.kind for g in layer}
        if kinds - {"X"}:
            depth += 1
        if kinds & {"T", "Tdg"}:
            t_depth += 1
        for g in layer:
            if g.kind in ("T", "Tdg"):
                t_count += 1
            elif g.kind == "H":
                h_count += 1
            elif g.kind == "CNOT":
                cnot_count += 1
            elif g.kind == "SWAP":
                cnot_count += 3
    return ResourceCounts(circuit.n_qubits, depth, t_count, t_depth,
                          h_count, cnot_count)


# --- text format -----------------------------------------------------------
#
#   .qubits <count>
#   .reg <name> <role> <first> <last>
#   x q | h q | s q | sdg q | t q | tdg q | cnot c t | swap a b
#   tof c1 c2 t | mpmct <polarities> c1 ... ck -> t
#
# `#` starts a comment; blank lines are ignored.

_KIND_TO_MNEMONIC = {
    "X": "x", "H": "h", "S": "s", "Sdg": "sdg", "T": "t", "Tdg": "tdg",
    "CNOT": "cnot", "SWAP": "swap", "TOFFOLI": "tof",
}
_MNEMONIC_TO_KIND = {v: k for k, v in _KIND_TO_MNEMONIC.items()}


def write_circuit(circuit: Circuit) -> str:
    lines = [f".qubits {circuit.n_qubits}"]
    for reg in circuit.registers:
        lines.append(f".reg {reg.name} {reg.role} {reg.first} {reg.last}")
    for g in circuit.gates:
        if g.kind == "MPMCT":
            pol = "".join("+" if p else "-" for p in g.polarity)
            ctl = " ".join(str(q) for q in g.controls)
            lines.append(f"mpmct {pol} {ctl} -> {g.target}")
        else:
            ops = " ".join(str(q) for q in g.qubits)
            lines.append(f"{_KIND_TO_MNEMONIC[g.kind]} {ops}")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    n_qubits: int | None = None
    registers: list[Register] = []
    gates: list[Gate] = []

    def fail(lineno: int, reason: str) -> CircuitError:
        return CircuitError(f"line {lineno}: {reason}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0].lower()
        try:
            if head == ".qubits":
                if n_qubits is not None:
                    raise fail(lineno, "duplicate .qubits header")
                n_qubits = int(parts[1])
                continue
            if head == ".reg":
                if len(parts) != 5:
                    raise fail(lineno, ".reg needs name, role, first, last")
                registers.append(Register(parts[1], parts[2], int(parts[3]), int(parts[4])))
                continue
            if n_qubits is None:
                raise fail(lineno, "gate before .qubits header")
            if head == "mpmct":
                if "->" not in parts:
                    raise fail(lineno, "mpmct needs '-> target'")
                arrow = parts.index("->")
                pol_str = parts[1]
                if set(pol_str) - {"+", "-"}:
                    raise fail(lineno, f"bad polarity string {pol_str!r}")
                controls = [int(p) for p in parts[2:arrow]]
                targets = [int(p) for p in parts[arrow + 1:]]
                if len(targets) != 1:
                    raise fail(lineno, "mpmct takes a single target")
                if len(pol_str) != len(controls):
                    raise fail(lineno, "polarity length mismatch: "
                               f"{len(pol_str)} signs for {len(controls)} controls")
                polarity = tuple(c == "+" for c in pol_str)
                gates.append(Gate("MPMCT", tuple(controls) + (targets[0],), polarity))
                continue
            if head not in _MNEMONIC_TO_KIND:
                raise fail(lineno, f"unknown gate {head!r}")
            kind = _MNEMONIC_TO_KIND[head]
            qubits = tuple(int(p) for p in parts[1:])
            gates.append(Gate(kind, qubits))
        except CircuitError as exc:
            if str(exc).startswith("line "):
                raise
            raise fail(lineno, str(exc)) from None
        except (ValueError, IndexError) as exc:
            raise fail(lineno, f"malformed line: {exc}") from None

    if n_qubits is None:
        raise CircuitError("missing .qubits header")
    if not registers:
        registers = [Register("q", "ancilla", 0, n_qubits - 1)]
    try:
        return Circuit(n_qubits, tuple(registers), tuple(gates))
    except CircuitError as exc:
        raise CircuitError(f"invalid circuit: {exc}") from None
