"""Pulse-sequence language, compiler and rewrite passes."""
from importlib import resources

from .compiler import CompiledUnitary, compile_file, compile_sequence, event_propagator
from .equivalence import (
    diagonal_phases,
    equivalent_global_phase,
    equivalent_up_to_diagonal_phases,
)
from .passes import expand_composite_z, optimize, optimize_with_stats
from .syntax import (
    Couple,
    Delay,
    Program,
    Pulse,
    SequenceAST,
    SystemDecl,
    ZComposite,
    format_program,
    format_sequence,
    parse,
    parse_file,
)


def fixture_path(name):
    """Path of a shipped sequence or configuration file, e.g. ``cnot_v1.pseq``."""
    return resources.files("spinlogic").joinpath("data", name)


__all__ = [
    "CompiledUnitary", "Couple", "Delay", "Program", "Pulse", "SequenceAST",
    "SystemDecl", "ZComposite", "compile_file", "compile_sequence",
    "diagonal_phases", "equivalent_global_phase", "equivalent_up_to_diagonal_phases",
    "event_propagator", "expand_composite_z", "fixture_path", "format_program",
    "format_sequence", "optimize", "optimize_with_stats", "parse", "parse_file",
]
