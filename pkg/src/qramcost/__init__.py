"""qramcost: qRAM circuit families over Clifford+T with surface-code costing."""

from .ir import (Circuit, CircuitError, Gate, LayeredCircuit, Register,
                 ResourceCounts, count_resources, gate_tally, parse_circuit,
                 schedule_asap, write_circuit)

__all__ = [
    "Circuit", "CircuitError", "Gate", "LayeredCircuit", "Register",
    "ResourceCounts", "count_resources", "gate_tally", "parse_circuit",
    "schedule_asap", "write_circuit",
]

__version__ = "0.1.0"
