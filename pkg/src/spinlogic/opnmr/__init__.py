"""Hyperpolarization and optically pumped semiconductor gate mechanisms."""
from .lattice import (
    Cell,
    Lattice,
    TransportResult,
    addressable,
    basis_qubit,
    ca_transport,
    conditional_flip,
    default_lattice,
    flips,
    gradient_address,
    lattice_from_dict,
    lattice_to_dict,
    load_lattice,
    make_lattice,
    pump,
    pump_cell,
    raman_readout,
    write_trace_csv,
)
from .mechanisms import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    CPAction,
    OverhauserModel,
    PumpConfig,
    cp_gate,
    cp_gate_propagator,
    cross_polarize,
    electron_polarization,
    larmor_frequency,
    mediated_coupling,
    overhauser_shift,
    resonance_frequency,
    saturation,
)

__all__ = [
    "CPAction", "Cell", "Lattice", "OverhauserModel", "PumpConfig", "SIGMA_MINUS",
    "SIGMA_PLUS", "TransportResult", "addressable", "basis_qubit", "ca_transport",
    "conditional_flip", "cp_gate", "cp_gate_propagator", "cross_polarize",
    "default_lattice", "electron_polarization", "flips", "gradient_address",
    "larmor_frequency", "lattice_from_dict", "lattice_to_dict", "load_lattice",
    "make_lattice", "mediated_coupling", "overhauser_shift", "pump", "pump_cell",
    "raman_readout", "resonance_frequency", "saturation", "write_trace_csv",
]
