"""Entanglement-adaptive preparation of amplitude-encoded quantum registers.

Pipeline: classical amplitude vector -> right-canonical matrix product
state (optionally truncated to a lower-entanglement approximation) -> one
layer of sequential variable-width unitary gates -> exact statevector
verification and benchmarking.
"""

from .circuit import (
    Circuit,
    GateOp,
    capped_baseline,
    entangling_cost,
    gate_widths,
    isometry_reference_cost,
    synthesize,
)
from .mps import (
    AmplitudeVector,
    EntropyReport,
    MpsState,
    TruncationStep,
    apply_truncation,
    decompose,
    fidelity,
    mean_normalized_bipartite_entropy,
    next_truncation,
    reconstruct,
    verify_right_canonical,
)
from .sim import StateVector, apply_gate, run, verify

__all__ = [
    "AmplitudeVector",
    "Circuit",
    "EntropyReport",
    "GateOp",
    "MpsState",
    "StateVector",
    "TruncationStep",
    "apply_gate",
    "apply_truncation",
    "capped_baseline",
    "decompose",
    "entangling_cost",
    "fidelity",
    "gate_widths",
    "isometry_reference_cost",
    "mean_normalized_bipartite_entropy",
    "next_truncation",
    "reconstruct",
    "run",
    "synthesize",
    "verify",
    "verify_right_canonical",
]

__version__ = "0.1.0"
