import csv
import json
import math

import numpy as np
import pytest

from oracles import conditional_flip_table, truth_table_fidelity
from spinlogic.dynamics import SpinSystem, DensityState
from spinlogic.errors import TransportBlocked
from spinlogic.opnmr import (
    SIGMA_MINUS, SIGMA_PLUS, CPAction, Cell, OverhauserModel, PumpConfig, addressable, basis_qubit,
    ca_transport, conditional_flip, cp_gate, cp_gate_propagator, cross_polarize, default_lattice,
    electron_polarization, flips, gradient_address, lattice_from_dict, lattice_to_dict, load_lattice,
    make_lattice, mediated_coupling, overhauser_shift, pump, pump_cell, raman_readout,
    resonance_frequency, saturation, write_trace_csv,
)
from spinlogic.opnmr.lattice import NUCLEUS
from spinlogic.seqlang import fixture_path
from spinlogic.spinops import CNOT, phase_fidelity


class TestPump:
    def test_saturation(self):
        assert saturation(0.0) == 0.0
        assert saturation(1.0) == 0.5
        powers = np.linspace(0, 100, 50)
        vals = [saturation(p) for p in powers]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1
        with pytest.raises(ValueError):
            saturation(-1.0)

    def test_helicity_sets_sign(self):
        assert electron_polarization(PumpConfig(SIGMA_MINUS, 1.0)) == 0.25
        assert electron_polarization(PumpConfig(SIGMA_PLUS, 1.0)) == -0.25
        assert electron_polarization(PumpConfig(SIGMA_PLUS, 0.0)) == 0.0

    @pytest.mark.parametrize("power", [0.0, 0.3, 1.0, 7.0, 1e6])
    def test_helicity_equivariance(self, power):
        cell = Cell(0, 0.0, qubit=basis_qubit(0))
        cfg = PumpConfig(SIGMA_MINUS, power)
        a, b = pump(cell, cfg), pump(cell, cfg.flipped())
        assert a.electron_sz == -b.electron_sz
        assert abs(a.electron_sz) <= 0.5

    def test_hyperfine_transfer_aligns_nucleus(self):
        cell = Cell(0, 0.0, qubit=basis_qubit(0))
        assert pump(cell, PumpConfig(SIGMA_PLUS, 1.0)).nuclear_polarization == -1.0
        assert pump(cell, PumpConfig(SIGMA_MINUS, 1.0)).nuclear_polarization == 1.0
        assert pump(cell, PumpConfig(SIGMA_PLUS, 1.0), hyperfine_transfer=False).nuclear_polarization == 1.0

    def test_bad_config(self):
        with pytest.raises(ValueError):
            PumpConfig("linear", 1.0)
        with pytest.raises(ValueError):
            PumpConfig(SIGMA_MINUS, -1.0)


class TestCrossPolarization:
    def test_endpoints(self):
        assert cross_polarize(-3.0, 0.2, 1.0) == -3.0
        assert cross_polarize(-3.0, 0.2, 0.0) == 0.2

    def test_convex_and_takes_source_sign(self, rng):
        for _ in range(100):
            src, tgt, eff = rng.uniform(-1e5, 1e5), rng.uniform(-1, 1), rng.uniform(0, 1)
            out = cross_polarize(src, tgt, eff)
            assert min(src, tgt) - 1e-9 <= out <= max(src, tgt) + 1e-9
            if eff > 0.5 and abs(src) > 10 * abs(tgt):
                assert np.sign(out) == np.sign(src)

    def test_bad_efficiency(self):
        with pytest.raises(ValueError):
            cross_polarize(1.0, 0.0, 1.5)


class TestCPGate:
    def test_selection(self):
        assert cp_gate(-1, 1) is CPAction.NOOP
        assert cp_gate(-1, -1) is CPAction.NOOP
        assert cp_gate(1, 1) is CPAction.SEQUENCE_A
        assert cp_gate(1, -1) is CPAction.SEQUENCE_B
        with pytest.raises(ValueError):
            cp_gate(0, 1)

    def test_propagators(self):
        sys = SpinSystem.build([("Xe", "129Xe"), ("H", "1H")])
        assert np.array_equal(cp_gate_propagator(sys, CPAction.NOOP, "Xe", "H"), np.eye(4))
        for action in (CPAction.SEQUENCE_A, CPAction.SEQUENCE_B):
            u = cp_gate_propagator(sys, action, "Xe", "H")
            assert np.allclose(np.abs(u), CNOT, atol=1e-12)
            assert np.allclose(u[:2, :2], np.eye(2), atol=1e-12)
        a = cp_gate_propagator(sys, CPAction.SEQUENCE_A, "Xe", "H")
        b = cp_gate_propagator(sys, CPAction.SEQUENCE_B, "Xe", "H")
        assert np.allclose(a @ b, np.eye(4), atol=1e-12)


class TestOverhauser:
    def test_value(self):
        assert overhauser_shift(OverhauserModel(), 0.5) == 5e4
        assert overhauser_shift(OverhauserModel(), 0.0) == 0.0

    def test_linear_in_each_factor(self, rng):
        for _ in range(50):
            a, rho, sz = rng.uniform(0, 1e6), rng.uniform(0, 2), rng.uniform(-0.5, 0.5)
            base = overhauser_shift(OverhauserModel(a, rho), sz)
            assert overhauser_shift(OverhauserModel(2 * a, rho), sz) == pytest.approx(2 * base)
            assert overhauser_shift(OverhauserModel(a, 3 * rho), sz) == pytest.approx(3 * base)
            assert overhauser_shift(OverhauserModel(a, rho), -sz) == pytest.approx(-base)

    def test_bounds(self):
        with pytest.raises(ValueError):
            overhauser_shift(OverhauserModel(), 0.6)
        with pytest.raises(ValueError):
            OverhauserModel(density_rho=-1)

    def test_resonance(self):
        model = OverhauserModel(b0=2.0)
        larmor = 1.0839e8 * 2.0 / (2 * math.pi)
        assert resonance_frequency(model, 0.0) == pytest.approx(larmor)
        assert resonance_frequency(model, -0.5) == pytest.approx(larmor - 5e4)

    def test_raman_readout(self):
        assert raman_readout(Cell(0, 0.0, electron_sz=0.25)) == 1
        assert raman_readout(Cell(0, 0.0, electron_sz=-0.25)) == -1
        assert raman_readout(Cell(0, 0.0)) == 0


class TestConditionalFlip:
    @pytest.mark.parametrize("bw", [10.0, 1e3, 5e4])
    def test_truth_table_is_cnot(self, bw):
        table = conditional_flip_table(bw)
        assert np.allclose(table, np.abs(CNOT), atol=1e-12)
        assert truth_table_fidelity(table) >= 0.999

    def test_too_wide_pulse_loses_selectivity(self):
        table = conditional_flip_table(1e3, coupling_A=0.4e3)
        assert truth_table_fidelity(table) < 0.999

    def test_infinite_bandwidth_flips_always(self):
        cell = Cell(0, 0.0, electron_sz=-0.5, qubit=basis_qubit(0))
        assert flips(cell, 0.0, math.inf)
        assert conditional_flip(cell, 0.0, math.inf).qubit.rho[1, 1].real == pytest.approx(1.0)

    def test_superposition_stays_pure(self):
        plus = DensityState(np.full((2, 2), 0.5, dtype=complex), NUCLEUS.labels)
        cell = Cell(0, 0.0, electron_sz=0.5, qubit=plus)
        out = conditional_flip(cell, resonance_frequency(cell.overhauser, 0.5), 1.0)
        assert np.trace(out.qubit.rho @ out.qubit.rho).real == pytest.approx(1.0)

    def test_bandwidth_positive(self):
        with pytest.raises(ValueError):
            flips(Cell(0, 0.0), 0.0, 0.0)


def test_mediated_coupling():
    assert mediated_coupling(0.0) == 0.0
    assert mediated_coupling(1.0) == pytest.approx(25.0)
    assert mediated_coupling(1e12) == pytest.approx(50.0)
    vals = [mediated_coupling(p) for p in np.linspace(0.01, 10, 30)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


class TestTransport:
    @pytest.mark.parametrize("n", range(2, 17))
    def test_hops_linear(self, n):
        lat = make_lattice(n, bits=[1] + [0] * (n - 1))
        res = ca_transport(lat, 0, n - 1)
        assert res.hops == n - 1
        assert res.flips == 3 * res.hops == len(res.trace)
        assert [r[0] for r in res.trace] == list(range(1, len(res.trace) + 1))
        assert res.lattice.cells[n - 1].qubit.rho[1, 1].real == pytest.approx(1.0)
        assert all(c.qubit.rho[0, 0].real == pytest.approx(1.0) for c in res.lattice.cells[:-1])

    def test_superposition_moves_intact(self):
        lat = make_lattice(4)
        psi = np.array([math.cos(0.3), math.sin(0.3) * np.exp(0.7j)])
        state = DensityState(np.outer(psi, psi.conj()), NUCLEUS.labels)
        lat = lat.with_cell(Cell(3, lat.cells[3].z, lat.cells[3].pump, lat.cells[3].electron_sz, state,
                                 lat.cells[3].overhauser))
        res = ca_transport(lat, 3, 0)
        assert res.hops == 3
        moved = res.lattice.cells[0].qubit.rho
        assert np.real(psi.conj() @ moved @ psi) >= 1 - 1e-12

    def test_zero_distance(self):
        res = ca_transport(default_lattice(), 2, 2)
        assert res.hops == 0 and res.trace == ()

    def test_blocked_middle_cell(self):
        lat = pump_cell(default_lattice(), 2, PumpConfig(SIGMA_MINUS, 0.0))
        assert lat.mediated_j[1] == 0 and lat.mediated_j[2] == 0
        for src, dst in ((0, 4), (4, 0)):
            with pytest.raises(TransportBlocked) as info:
                ca_transport(lat, src, dst)
            assert info.value.cell == 2
            assert str(info.value) == "transport blocked at cell 2"
        assert ca_transport(lat, 0, 1).hops == 1

    def test_bad_index(self):
        with pytest.raises(IndexError):
            ca_transport(default_lattice(), 0, 5)

    def test_trace_csv(self, tmp_path):
        res = ca_transport(make_lattice(3), 0, 2)
        rows = list(csv.reader(write_trace_csv(res.trace, tmp_path / "t.csv").open()))
        assert rows[0] == ["step", "cell", "operation"]
        assert rows[1] == ["1", "1", "cflip 0->1"]
        assert len(rows) == 7


class TestGradient:
    def test_no_gradient_not_addressable(self):
        lat = make_lattice(3, gradient_g=0.0)
        assert not addressable(lat, 0, 1)

    def test_gap_formula(self):
        lat = make_lattice(3, spacing=2e-3, gradient_g=0.05)
        gap = gradient_address(lat, 1) - gradient_address(lat, 0)
        assert gap == pytest.approx(1.0839e8 * 0.05 * 2e-3 / (2 * math.pi))

    def test_default_lattice_ten_linewidths(self):
        lat = default_lattice()
        assert len(lat) == 5
        for i in range(4):
            gap = gradient_address(lat, i + 1) - gradient_address(lat, i)
            assert gap / lat.linewidth == pytest.approx(10.0)
            assert addressable(lat, i, i + 1)

    def test_cells_use_local_field(self):
        lat = default_lattice()
        assert lat.cells[4].overhauser.b0 == pytest.approx(lat.b0 + lat.gradient_g * lat.cells[4].z)


class TestLatticeJson:
    def test_round_trip(self, tmp_path):
        lat = pump_cell(make_lattice(4, bits=[0, 1, 1, 0]), 1, PumpConfig(SIGMA_PLUS, 2.0))
        path = tmp_path / "lat.json"
        path.write_text(json.dumps(lattice_to_dict(lat)))
        again = load_lattice(path)
        assert lattice_to_dict(again) == lattice_to_dict(lat)
        assert [c.electron_sz for c in again.cells] == [c.electron_sz for c in lat.cells]

    def test_shipped_default(self):
        shipped = load_lattice(fixture_path("default_lattice.json"))
        assert lattice_to_dict(shipped) == lattice_to_dict(default_lattice())

    @pytest.mark.parametrize("doc", [{}, {"cells": [{"power": 1}]}, {"cells": [{"z": 0, "nucleus": 2}]},
                                     {"cells": [{"z": 1}, {"z": 0}]}])
    def test_malformed(self, doc):
        with pytest.raises(ValueError):
            lattice_from_dict(doc)
