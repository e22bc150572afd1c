"""Optically pumped cells, conditional flips and cellular-automata transport.

Each cell holds one 31P nuclear qubit (``|0>`` = spin up) and a classical
conduction-electron polarization set by its pump laser. Neighboring qubits
interact through a coupling mediated by the pumped electrons; a bond
carries the coupling of its weaker-pumped cell, so an unpumped cell
isolates itself from both neighbors.
"""
import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..config import GAMMA, J_MAX_HZ, P_SAT, XE_LINEWIDTH_HZ
from ..dynamics import DensityState, SpinSystem, evolve, rotation_propagator
from ..errors import TransportBlocked
from ..spinops import CNOT
from .mechanisms import (
    OverhauserModel,
    PumpConfig,
    SIGMA_MINUS,
    electron_polarization,
    larmor_frequency,
    mediated_coupling,
    overhauser_shift,
    resonance_frequency,
)

NUCLEUS = SpinSystem.build([("P", "31P")])
# CNOT with the second qubit as control
CNOT_REVERSED = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)


def basis_qubit(bit):
    rho = np.zeros((2, 2), dtype=complex)
    rho[bit, bit] = 1.0
    return DensityState(rho, NUCLEUS.labels)


@dataclass(frozen=True, eq=False)
class Cell:
    index: int
    z: float  # m
    pump: PumpConfig = field(default_factory=PumpConfig)
    electron_sz: float = 0.0
    qubit: DensityState = field(default_factory=lambda: basis_qubit(0))
    overhauser: OverhauserModel = field(default_factory=OverhauserModel)

    def __post_init__(self):
        if abs(self.electron_sz) > 0.5 + 1e-15:
            raise ValueError(f"|<S_z>| must not exceed 1/2, got {self.electron_sz}")

    @property
    def nuclear_polarization(self):
        """``<2 I_z>``: +1 for spin up, -1 for spin down."""
        return self.qubit.polarization[0] / 2


def pump(cell, config, hyperfine_transfer=True):
    """Pump the cell's electrons; optionally align the nuclear polarization sign with them."""
    sz = electron_polarization(config)
    qubit = cell.qubit
    if hyperfine_transfer and sz != 0:
        p = qubit.polarization[0]
        qubit = qubit.with_polarization([math.copysign(abs(p), sz)])
    return replace(cell, pump=config, electron_sz=sz, qubit=qubit)


def flips(cell, pulse_freq, bandwidth):
    """Whether a selective pulse at ``pulse_freq`` is resonant with the cell's nucleus."""
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    nu = resonance_frequency(cell.overhauser, cell.electron_sz)
    return abs(pulse_freq - nu) <= bandwidth / 2


def conditional_flip(cell, pulse_freq, bandwidth):
    """Apply a pi pulse to the nucleus if the pulse hits its Overhauser-shifted line.

    Tuned to the shifted line for ``<S_z> = +1/2``, the pulse flips the
    nucleus only while the electrons are polarized positive: a CNOT with
    the electron as control.
    """
    if not flips(cell, pulse_freq, bandwidth):
        return cell
    u = rotation_propagator(NUCLEUS, "P", "x", math.pi)
    return replace(cell, qubit=evolve(cell.qubit, u))


def raman_readout(cell):
    """Sign of the Overhauser shift: +1 for spin up, -1 for down, 0 when unpolarized."""
    shift = overhauser_shift(cell.overhauser, cell.electron_sz)
    return int(np.sign(shift))


@dataclass(frozen=True, eq=False)
class Lattice:
    cells: tuple
    gradient_g: float = 0.0  # T/m
    b0: float = 2.0  # T
    gamma: float = GAMMA["31P"]
    coupling_A: float = 1e5  # Hz
    p_sat: float = P_SAT
    j_max: float = J_MAX_HZ
    linewidth: float = XE_LINEWIDTH_HZ

    def __post_init__(self):
        cells = tuple(self.cells)
        zs = [c.z for c in cells]
        if zs != sorted(zs):
            raise ValueError("cells must be ordered by position")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)

    def local_field(self, z):
        return self.b0 + self.gradient_g * z

    def model_at(self, z, density_rho=1.0):
        return OverhauserModel(self.coupling_A, density_rho, self.gamma, self.local_field(z))

    @property
    def mediated_j(self):
        """Coupling in Hz for each bond ``(i, i + 1)``."""
        return tuple(
            mediated_coupling(min(a.pump.power, b.pump.power), self.j_max, self.p_sat)
            for a, b in zip(self.cells, self.cells[1:])
        )

    def with_cell(self, cell):
        cells = list(self.cells)
        cells[cell.index] = cell
        return replace(self, cells=tuple(cells))

    def check_index(self, i):
        if not 0 <= i < len(self.cells):
            raise IndexError(f"cell index {i} out of range for {len(self.cells)} cells")


def make_lattice(n_cells, spacing=1e-3, power=1.0, helicity=SIGMA_MINUS, gradient_g=None,
                 linewidth=XE_LINEWIDTH_HZ, gap_ratio=10.0, b0=2.0, coupling_A=1e5,
                 density_rho=1.0, gamma=GAMMA["31P"], p_sat=P_SAT, j_max=J_MAX_HZ, bits=None):
    """A uniformly spaced, uniformly pumped chain.

    Without an explicit ``gradient_g`` the gradient is chosen so neighboring
    cells sit ``gap_ratio`` linewidths apart in frequency.
    """
    if gradient_g is None:
        gradient_g = gap_ratio * linewidth * 2 * math.pi / (abs(gamma) * spacing)
    bits = bits or [0] * n_cells
    lat = Lattice((), gradient_g, b0, gamma, coupling_A, p_sat, j_max, linewidth)
    cells = []
    for i in range(n_cells):
        z = i * spacing
        config = PumpConfig(helicity, power, p_sat=p_sat)
        cell = Cell(i, z, qubit=basis_qubit(bits[i]), overhauser=lat.model_at(z, density_rho))
        cells.append(pump(cell, config, hyperfine_transfer=False))
    return replace(lat, cells=tuple(cells))


def default_lattice():
    return make_lattice(5)


def pump_cell(lattice, i, config, hyperfine_transfer=False):
    lattice.check_index(i)
    return lattice.with_cell(pump(lattice.cells[i], config, hyperfine_transfer))


def gradient_address(lattice, i):
    """Resonance frequency (Hz) of cell ``i`` in the field gradient, without Overhauser shift."""
    lattice.check_index(i)
    return larmor_frequency(lattice.gamma, lattice.local_field(lattice.cells[i].z))


def addressable(lattice, i, j):
    """Two cells can be addressed separately when their lines are more than a linewidth apart."""
    return abs(gradient_address(lattice, i) - gradient_address(lattice, j)) > lattice.linewidth


def _partial_traces(rho2):
    r = rho2.reshape(2, 2, 2, 2)
    return np.einsum("ajbj->ab", r), np.einsum("iaib->ab", r)


@dataclass(frozen=True, eq=False)
class TransportResult:
    hops: int
    flips: int
    lattice: Lattice
    trace: tuple  # (step, cell, operation)


def ca_transport(lattice, src, dst, step0=0):
    """Move the qubit in cell ``src`` to cell ``dst`` by nearest-neighbor SWAPs.

    Each SWAP is three mediated CNOTs. Every bond on the path is checked
    before anything moves; a bond without coupling raises
    :class:`TransportBlocked` naming the unpumped cell.
    """
    lattice.check_index(src)
    lattice.check_index(dst)
    step = 1 if dst > src else -1
    path = list(range(src, dst, step))
    bonds = lattice.mediated_j
    for k in path:
        lo, hi = min(k, k + step), max(k, k + step)
        if bonds[lo] <= 0:
            a, b = lattice.cells[lo], lattice.cells[hi]
            if a.pump.power == 0 and b.pump.power != 0:
                blocked = lo
            elif b.pump.power == 0 and a.pump.power != 0:
                blocked = hi
            else:
                blocked = hi if step > 0 else lo
            raise TransportBlocked(blocked)

    cells = list(lattice.cells)
    trace = []
    n = step0
    for k in path:
        a, b = k, k + step
        rho = np.kron(cells[a].qubit.rho, cells[b].qubit.rho)
        for u, target in ((CNOT, b), (CNOT_REVERSED, a), (CNOT, b)):
            rho = u @ rho @ u.conj().T
            n += 1
            control = a if target == b else b
            trace.append((n, target, f"cflip {control}->{target}"))
        ra, rb = _partial_traces(rho)
        cells[a] = replace(cells[a], qubit=DensityState(ra, NUCLEUS.labels))
        cells[b] = replace(cells[b], qubit=DensityState(rb, NUCLEUS.labels))
    return TransportResult(len(path), 3 * len(path), replace(lattice, cells=tuple(cells)), tuple(trace))


def lattice_to_dict(lattice):
    return {
        "b0": lattice.b0,
        "gamma": lattice.gamma,
        "coupling_A": lattice.coupling_A,
        "gradient_g": lattice.gradient_g,
        "p_sat": lattice.p_sat,
        "j_max": lattice.j_max,
        "linewidth": lattice.linewidth,
        "cells": [
            {
                "z": c.z,
                "power": c.pump.power,
                "helicity": c.pump.helicity,
                "rho": c.overhauser.density_rho,
                "nucleus": int(round(c.qubit.rho[1, 1].real)),
            }
            for c in lattice.cells
        ],
    }


def lattice_from_dict(doc):
    """Build a lattice from a JSON document; electrons start in their pumped steady state."""
    try:
        lat = Lattice(
            (),
            gradient_g=float(doc.get("gradient_g", 0.0)),
            b0=float(doc.get("b0", 2.0)),
            gamma=float(doc.get("gamma", GAMMA["31P"])),
            coupling_A=float(doc.get("coupling_A", 1e5)),
            p_sat=float(doc.get("p_sat", P_SAT)),
            j_max=float(doc.get("j_max", J_MAX_HZ)),
            linewidth=float(doc.get("linewidth", XE_LINEWIDTH_HZ)),
        )
        cells = []
        for i, c in enumerate(doc["cells"]):
            z = float(c["z"])
            config = PumpConfig(c.get("helicity", SIGMA_MINUS), float(c.get("power", 0.0)), p_sat=lat.p_sat)
            bit = int(c.get("nucleus", 0))
            if bit not in (0, 1):
                raise ValueError(f"cell {i}: nucleus must be 0 or 1")
            cell = Cell(i, z, qubit=basis_qubit(bit), overhauser=lat.model_at(z, float(c.get("rho", 1.0))))
            cells.append(pump(cell, config, hyperfine_transfer=False))
        return replace(lat, cells=tuple(cells))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed lattice document: {exc}") from exc


def load_lattice(path):
    with open(path, encoding="utf-8") as fh:
        return lattice_from_dict(json.load(fh))


def write_trace_csv(trace, path):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "cell", "operation"])
        writer.writerows(trace)
    return path
