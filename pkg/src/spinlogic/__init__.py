"""Pulse-level compiler and simulator for two-spin NMR logic gates."""
from ._backend import BACKEND
from .config import TOL, Tolerances
from .spinops import CNOT, expm_hermitian, kron, phase_fidelity, spin_operator

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CNOT",
    "TOL",
    "Tolerances",
    "expm_hermitian",
    "kron",
    "phase_fidelity",
    "spin_operator",
]
