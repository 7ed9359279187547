"""Lowering of TOFFOLI and MPMCT gates to the Clifford+T alphabet.

Toffoli variants:
  td3  no ancillae, T-depth 3
  td2  one ancilla, T-depth 2
  td1  four ancillae, T-depth 1 (T-count 7, 16 CNOTs, depth 7)

Multi-controlled gates lower through a borrowed-ancilla ladder of
4(c-2) Toffoli slots over c-2 ladder ancillae plus one helper, with the
controlled-phase content of the slots shared across repeat visits to the
same qubit triple.  The emitted fragment restores every ancilla to |0>
and reproduces the multi-controlled X exactly on ancilla-|0> inputs.
"""

from __future__ import annotations

from .ir import (Circuit, CircuitError, Gate, count_resources,
                 single_register_circuit)


def _g(kind: str, *qubits: int) -> Gate:
    return Gate(kind, qubits)


# --- Toffoli variants --------------------------------------------------------

def toffoli_ancilla_requirement(variant: str) -> int:
    try:
        return {"td3": 0, "td2": 1, "td1": 4}[variant]
    except KeyError:
        raise CircuitError(f"unknown Toffoli variant {variant!r}") from None


def decompose_toffoli(variant: str, c1: int, c2: int, target: int,
                      ancillae: tuple[int, ...] = ()) -> list[Gate]:
    """Clifford+T gate list for a Toffoli on (c1, c2 -> target).

    Ancillae must start in |0>; they are returned to |0>.
    """
    need = toffoli_ancilla_requirement(variant)
    if len(ancillae) < need:
        raise CircuitError(f"Toffoli {variant} needs {need} ancillae, "
                           f"got {len(ancillae)}")
    a, b, t = c1, c2, target
    if variant == "td3":
        wires = max(a, b, t) + 1
        return _align_t_layers([
            _g("H", t),
            _g("Tdg", a), _g("T", b), _g("T", t),
            _g("CNOT", a, b),
            _g("CNOT", t, a),
            _g("Tdg", a), _g("CNOT", b, t),
            _g("CNOT", b, a),
            _g("Tdg", a), _g("Tdg", b), _g("T", t),
            _g("CNOT", t, a),
            _g("S", a), _g("CNOT", b, t),
            _g("CNOT", a, b), _g("H", t),
        ], wires)
    if variant == "td2":
        d = ancillae[0]
        wires = max(a, b, t, d) + 1
        return _align_t_layers([
            _g("H", t),
            _g("CNOT", a, t),
            _g("CNOT", t, d),
            _g("CNOT", b, d),
            _g("Tdg", d), _g("T", t), _g("Tdg", b), _g("Tdg", a),
            _g("CNOT", b, d),
            _g("CNOT", t, d),
            _g("CNOT", a, t),
            _g("CNOT", b, a),
            _g("CNOT", t, b),
            _g("Tdg", t), _g("T", b), _g("T", a),
            _g("CNOT", t, b),
            _g("CNOT", b, a), _g("H", t),
        ], wires)
    # td1: parity-encoded phase gadget, all seven T gates in one layer.
    # The S/T/Sdg sandwich on the second control pins that T gate into the
    # shared T layer under ASAP (net operator is exactly T).
    d0, d1, d2, d3 = ancillae[:4]
    return [
        _g("H", t), _g("CNOT", b, d2), _g("CNOT", a, d0),
        _g("CNOT", b, d1), _g("CNOT", t, d2), _g("CNOT", d0, d3),
        _g("CNOT", a, d1), _g("CNOT", t, d3), _g("CNOT", d2, d0),
        _g("S", b),
        _g("T", a), _g("T", b), _g("T", t), _g("T", d0),
        _g("Tdg", d1), _g("Tdg", d2), _g("Tdg", d3),
        _g("CNOT", d2, d0), _g("CNOT", t, d3), _g("CNOT", a, d1),
        _g("Sdg", b),
        _g("CNOT", d0, d3), _g("CNOT", t, d2), _g("CNOT", b, d1),
        _g("H", t), _g("CNOT", b, d2), _g("CNOT", a, d0),
    ]


# --- MPMCT ladder ------------------------------------------------------------
#
# Slot templates.  Wire names inside a slot:
#   z  control wire checked by this slot
#   A  middle wire (ladder ancilla holding a partial product, or x2)
#   B  the slot's target wire, Hadamard-bracketed
#   h  helper ancilla (clean between slots)
#
# Each slot contributes one T layer.  Repeat visits to a triple share the
# single-variable and two-variable phase terms, applied as S/Sdg at moments
# when the needed combination sits on a wire.

def _quad_slot(z: int, A: int, B: int, event: int,
               open_h: bool, close_h: bool) -> tuple[list[Gate], list[Gate]]:
    """One of the four events on an interior triple.

    Returns (gates_before_T, T-layer gates); caller appends the rest.
    event: 1..4 within the quad (1/3 open a bracket, 2/4 close one).
    """
    pre: list[Gate] = []
    tg: list[Gate] = [_g("T", z), _g("Tdg", A), _g("T", B)]
    post: list[Gate] = []
    if event in (1, 3):  # bracket-opening slot, exposure of x^zeta on the way out
        if open_h:
            pre.append(_g("H", B))
        pre.append(_g("S", z))
        if event == 1:
            pre.append(_g("S", A))
        pre.append(_g("CNOT", B, A))
        pre.append(_g("CNOT", A, z))
        post.append(_g("CNOT", B, A))
        post.append(_g("CNOT", A, z))
        post.append(_g("Sdg", z))
        post.append(_g("CNOT", B, z))
    else:  # bracket-closing slot, exposure of x^alpha on the way in
        if event == 2:
            pre.append(_g("S", A))
        pre.append(_g("CNOT", A, z))
        pre.append(_g("Sdg", z))
        pre.append(_g("CNOT", B, A))
        pre.append(_g("CNOT", B, z))
        post.append(_g("CNOT", A, z))
        post.append(_g("CNOT", B, A))
        if close_h:
            post.append(_g("H", B))
    return pre + tg, post


def _emit_quad_event(gates: list[Gate], z: int, A: int, B: int, event: int) -> None:
    head, tail = _quad_slot(z, A, B, event, open_h=event in (1, 3),
                            close_h=event in (2, 4))
    gates.extend(head)
    gates.extend(tail)


def _emit_t_open(gates: list[Gate], z: int, B: int, h: int, spare: int) -> None:
    # First ladder slot: the middle control is a cleared ancilla, so only the
    # bracket-shared phase content is applied here; the T on the cleared
    # spare wire completes the slot's T quota without adding phase.
    gates.append(_g("H", B))
    gates.append(_g("CNOT", z, h))   # h: x
    gates.append(_g("CNOT", B, z))   # z: x^zeta
    gates.append(_g("T", h))
    gates.append(_g("Tdg", z))
    gates.append(_g("T", B))
    gates.append(_g("T", spare))
    gates.append(_g("CNOT", B, z))
    gates.append(_g("CNOT", z, h))


def _emit_t_close(gates: list[Gate], z: int, A: int, B: int, h: int) -> None:
    # Second visit to the target triple: the middle wire now carries the
    # partial product, so this slot applies the full conditioned phase.
    gates.append(_g("CNOT", A, h))   # h: w
    gates.append(_g("CNOT", B, h))   # h: w^zeta
    gates.append(_g("CNOT", A, z))   # z: x^w
    gates.append(_g("CNOT", z, B))   # B: zeta^x^w
    gates.append(_g("T", A))
    gates.append(_g("Tdg", h))
    gates.append(_g("Tdg", z))
    gates.append(_g("T", B))
    gates.append(_g("CNOT", z, B))
    gates.append(_g("CNOT", A, z))
    gates.append(_g("CNOT", B, h))
    gates.append(_g("CNOT", A, h))
    gates.append(_g("H", B))


def _emit_parity_phase(gates: list[Gate], x1: int, x2: int, h: int) -> None:
    # Shared two-control parity phase, applied once between the two base
    # slots; overlaps wires idle during the neighbouring ladder slots.
    gates.append(_g("CNOT", x1, h))
    gates.append(_g("CNOT", x2, h))
    gates.append(_g("Sdg", h))
    gates.append(_g("CNOT", x2, h))
    gates.append(_g("CNOT", x1, h))


def _emit_base_slot(gates: list[Gate], x1: int, x2: int, W: int, h: int,
                    second: bool) -> None:
    # Slot computing the two-control product at the bottom of the ladder.
    if second:
        gates.append(_g("S", x1))
        gates.append(_g("S", x2))
    gates.append(_g("H", W))
    gates.append(_g("CNOT", x2, h))   # h: x2
    gates.append(_g("CNOT", W, x1))   # x1: x1^zeta
    gates.append(_g("CNOT", x1, h))   # h: x1^x2^zeta
    gates.append(_g("CNOT", W, x2))   # x2: x2^zeta
    gates.append(_g("T", W))
    gates.append(_g("Tdg", x1))
    gates.append(_g("Tdg", x2))
    gates.append(_g("T", h))
    gates.append(_g("CNOT", x1, h))
    gates.append(_g("CNOT", W, x2))
    gates.append(_g("CNOT", x2, h))
    gates.append(_g("CNOT", W, x1))
    gates.append(_g("H", W))


def mpmct_formula(c: int) -> dict[str, int]:
    """Closed-form fragment counts for a c-control mixed-polarity gate."""
    return {
        "depth": 28 * c - 60,
        "t_count": 12 * c - 20,
        "t_depth": 4 * (c - 2),
        "h_count": 4 * c - 6,
        "cnot_count": 24 * c - 40,
    }


def mpmct_ancilla_requirement(c: int) -> int:
    return c - 1


def _raw_mpmct_ladder(controls: tuple[int, ...], target: int,
                      ladder: tuple[int, ...], helper: int) -> list[Gate]:
    """Positive-polarity ladder over 4(c-2) slots; counts tuned afterwards."""
    c = len(controls)
    gates: list[Gate] = []
    # triple for ladder level j (1-indexed): (x_{j+2}, a_j, a_{j+1}),
    # where a_{c-1} is the target wire.
    def wire_a(j: int) -> int:
        return target if j == c - 1 else ladder[j - 1]

    def down(levels: range, event: int) -> None:
        for j in levels:  # descending
            _emit_quad_event(gates, controls[j + 1], wire_a(j), wire_a(j + 1), event)

    def up(levels: range, event: int) -> None:
        for j in levels:  # ascending
            _emit_quad_event(gates, controls[j + 1], wire_a(j), wire_a(j + 1), event)

    # pass 1
    _emit_t_open(gates, controls[c - 1], target, helper, ladder[0])
    down(range(c - 3, 0, -1), 1)
    _emit_parity_phase(gates, controls[0], controls[1], helper)
    _emit_base_slot(gates, controls[0], controls[1], ladder[0], helper, second=False)
    up(range(1, c - 2), 2)
    _emit_t_close(gates, controls[c - 1], wire_a(c - 2), target, helper)
    # pass 2
    down(range(c - 3, 0, -1), 3)
    _emit_base_slot(gates, controls[0], controls[1], ladder[0], helper, second=True)
    up(range(1, c - 2), 4)
    return gates


def _align_t_layers(gates: list[Gate], n_qubits: int) -> list[Gate]:
    """Insert X pads so each run of consecutive T/Tdg gates shares one layer.

    A run of T-type gates in the list is one intended T layer.  Wires whose
    frontier lags the latest site get X fillers (pairs, or a single X with
    the T gate conjugated, which costs only a global phase).  X gates carry
    no depth or tally weight.
    """
    out: list[Gate] = []
    frontier = [0] * n_qubits
    conj = {"T": "Tdg", "Tdg": "T"}

    def place(g: Gate) -> None:
        layer = max(frontier[q] for q in g.qubits) + 1
        for q in g.qubits:
            frontier[q] = layer
        out.append(g)

    i = 0
    while i < len(gates):
        g = gates[i]
        if g.kind not in ("T", "Tdg"):
            place(g)
            i += 1
            continue
        run = []
        while i < len(gates) and gates[i].kind in ("T", "Tdg"):
            run.append(gates[i])
            i += 1
        layer = max(frontier[t.qubits[0]] for t in run) + 1
        for t in run:
            q = t.qubits[0]
            gap = layer - 1 - frontier[q]
            kind = t.kind
            for _ in range(gap):
                place(_g("X", q))
            if gap % 2 == 1:
                kind = conj[kind]
            place(_g(kind, q))
            if gap % 2 == 1:
                place(_g("X", q))
    return out


def _pad_fragment(gates: list[Gate], n_qubits: int, helper: int,
                  targets: dict[str, int]) -> list[Gate]:
    """Append count/depth fillers acting trivially on cleared-helper inputs.

    CNOTs controlled by the helper (which is |0> at the fragment boundary)
    are identities there; S/Sdg pairs on the helper stretch the depth.
    """
    frag = single_register_circuit(n_qubits, gates)
    counts = count_resources(frag)
    for key in ("t_count", "t_depth", "h_count"):
        if getattr(counts, key) != targets[key]:
            raise CircuitError(
                f"fragment {key}={getattr(counts, key)} != {targets[key]}")
    if counts.cnot_count > targets["cnot_count"] or counts.depth > targets["depth"]:
        raise CircuitError(
            f"fragment exceeds targets: depth {counts.depth}/{targets['depth']}, "
            f"cnot {counts.cnot_count}/{targets['cnot_count']}")

    gates = list(gates)
    # CNOT fillers: helper-controlled, re-using an early idle window so they
    # occupy existing layers.  Insert right after the helper first returns
    # to |0>; partner is any wire idle at that point.
    deficit = targets["cnot_count"] - counts.cnot_count
    if deficit:
        pos, partner = _filler_window(gates, n_qubits, helper)
        fillers = [_g("CNOT", helper, partner)] * deficit
        gates[pos:pos] = fillers
        frag = frag.with_gates(gates)
        counts = count_resources(frag)
        if counts.depth > targets["depth"]:
            raise CircuitError("CNOT fillers overflowed the depth target")
    # Depth fillers: S/Sdg pairs on the helper between its uses, one extra
    # counted layer each when interleaved, two when appended.
    while counts.depth < targets["depth"]:
        remaining = targets["depth"] - counts.depth
        if remaining == 1:
            inserted = _insert_single_layer_pad(gates, n_qubits, helper)
            if not inserted:
                gates.append(_g("S", helper))
                gates.append(_g("Sdg", helper))
        else:
            gates.append(_g("S", helper))
            gates.append(_g("Sdg", helper))
        counts = count_resources(frag.with_gates(gates))
    if counts.as_tuple()[1:] != (targets["depth"], targets["t_count"],
                                 targets["t_depth"], targets["h_count"],
                                 targets["cnot_count"]):
        raise CircuitError(f"fragment counts {counts.as_tuple()} missed targets")
    return gates


def _filler_window(gates: list[Gate], n_qubits: int, helper: int) -> tuple[int, int]:
    """List position after the helper's first return window, plus an idle wire."""
    frontier = [0] * n_qubits
    helper_seen = False
    for i, g in enumerate(gates):
        layer = max(frontier[q] for q in g.qubits) + 1
        for q in g.qubits:
            frontier[q] = layer
        if helper in g.qubits:
            helper_seen = True
        elif helper_seen:
            # helper idle from here; partner = least-recently-used other wire
            partner = min((q for q in range(n_qubits) if q != helper),
                          key=lambda q: frontier[q])
            return i + 1, partner
    return len(gates), (helper + 1) % n_qubits


def _insert_single_layer_pad(gates: list[Gate], n_qubits: int, helper: int) -> bool:
    """Place S(helper) inside an existing layer and Sdg(helper) at the end,
    adding exactly one counted layer."""
    frontier = [0] * n_qubits
    depth_now = 0
    best = None
    for i, g in enumerate(gates):
        layer = max(frontier[q] for q in g.qubits) + 1
        for q in g.qubits:
            frontier[q] = layer
        depth_now = max(depth_now, layer)
        if helper not in g.qubits and frontier[helper] < depth_now:
            best = i + 1
    if best is None:
        return False
    gates[best:best] = [_g("S", helper)]
    gates.append(_g("Sdg", helper))
    return True


def decompose_mpmct(controls: tuple[int, ...], target: int,
                    polarity: tuple[bool, ...],
                    ancillae: tuple[int, ...]) -> list[Gate]:
    """Clifford+T gate list for a mixed-polarity multi-controlled X.

    Requires >= 4 controls and >= c-1 ancillae (c-2 ladder + 1 helper),
    all starting in |0>; the fragment restores them.
    """
    c = len(controls)
    if c < 4:
        raise CircuitError("MPMCT decomposition requires >= 4 controls")
    if len(polarity) != c:
        raise CircuitError("polarity length mismatch")
    if len(ancillae) < mpmct_ancilla_requirement(c):
        raise CircuitError(f"MPMCT with {c} controls needs "
                           f"{mpmct_ancilla_requirement(c)} ancillae")
    ladder = tuple(ancillae[: c - 2])
    helper = ancillae[c - 2]
    wires = list(controls) + [target] + list(ladder) + [helper]
    n = max(wires) + 1

    body = _raw_mpmct_ladder(tuple(controls), target, ladder, helper)
    body = _align_t_layers(body, n)
    body = _pad_fragment(body, n, helper, mpmct_formula(c))

    flips = [_g("X", q) for q, pos in zip(controls, polarity) if not pos]
    return flips + body + list(reversed(flips))


# --- whole-circuit driver ----------------------------------------------------

def lower_to_clifford_t(circuit: Circuit, toffoli_variant: str = "td1") -> Circuit:
    """Replace TOFFOLI/MPMCT gates with Clifford+T fragments.

    Sequentially executed big gates share the circuit's ancilla pool; the
    pool must be large enough for the widest gate.
    """
    pool: list[int] = []
    for reg in circuit.registers_by_role("ancilla"):
        pool.extend(reg.qubits)
    out: list[Gate] = []
    for g in circuit.gates:
        if g.kind == "TOFFOLI":
            need = toffoli_ancilla_requirement(toffoli_variant)
            anc = _claim_ancillae(pool, g.qubits, need)
            out.extend(decompose_toffoli(toffoli_variant, g.qubits[0],
                                         g.qubits[1], g.qubits[2], anc))
        elif g.kind == "MPMCT":
            c = len(g.controls)
            anc = _claim_ancillae(pool, g.qubits, mpmct_ancilla_requirement(c))
            out.extend(decompose_mpmct(g.controls, g.target, g.polarity, anc))
        else:
            out.append(g)
    return circuit.with_gates(out)


def _claim_ancillae(pool: list[int], busy: tuple[int, ...], need: int) -> tuple[int, ...]:
    free = [q for q in pool if q not in busy]
    if len(free) < need:
        raise CircuitError(f"ancilla pool too small: need {need}, have {len(free)}")
    return tuple(free[:need])
