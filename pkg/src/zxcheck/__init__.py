"""Quantum circuit equivalence checking by ZX-diagram miter simplification."""

from .circuit import Circuit, CircuitError, Gate, circuit_to_diagram, decompose_circuit, decompose_gate, reconstruct_swaps
from .diagram import Diagram, DiagramError, EdgeType, VertexType, adjoint, compose, is_graph_like, tensor, to_graph_like
from .equiv import CheckOptions, Verdict, VerdictKind, build_miter, check_equivalence, extract_permutation, plug_ancillas
from .phase import Phase
from .qasm import QasmError, load_qasm, parse_qasm, to_qasm
from .simplify import SimplifyOptions, SimplifyReport, full_reduce

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitError", "Gate", "circuit_to_diagram", "decompose_circuit", "decompose_gate",
    "reconstruct_swaps", "Diagram", "DiagramError", "EdgeType", "VertexType", "adjoint", "compose",
    "is_graph_like", "tensor", "to_graph_like", "CheckOptions", "Verdict", "VerdictKind", "build_miter",
    "check_equivalence", "extract_permutation", "plug_ancillas", "Phase", "QasmError", "load_qasm",
    "parse_qasm", "to_qasm", "SimplifyOptions", "SimplifyReport", "full_reduce",
]
