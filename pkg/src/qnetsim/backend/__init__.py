from .gates import gate_matrix, gate_arity, controlled_name, GATE_NAMES
from .circuit import Circuit, CircuitInstruction, OutcomeRecord
from .statevector import StateVector
from .simulator import apply_gate, measure, run_circuit, exact_state, is_standard, histogram_to_csv

__all__ = [
    "gate_matrix",
    "gate_arity",
    "controlled_name",
    "GATE_NAMES",
    "Circuit",
    "CircuitInstruction",
    "OutcomeRecord",
    "StateVector",
    "apply_gate",
    "measure",
    "run_circuit",
    "exact_state",
    "is_standard",
    "histogram_to_csv",
]
