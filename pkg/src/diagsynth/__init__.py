"""Approximate synthesis of diagonal unitaries under a CNOT budget."""
from .bench import SynthesisReport, SynthesisResult, budget_for_ratio, random_phases, synthesize
from .circuit import Circuit, Gate, emit_circuit, synthesize_coeffs, to_qasm
from .importance import ImportanceVector, is_active, phase_importance
from .pathsearch import PathState, SearchConfig, path_search
from .spectral import CoeffVector, PhaseVector, error, forward_wht, inverse_wht, utility

__version__ = "0.1.0"
