"""Acceptance gate: one printed PASS/FAIL line per criterion."""
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from oracles import CNOT_V2, SQRT_MINUS_I_CNOT, conditional_flip_table, truth_table_fidelity
from seqgen import SYSTEM, random_sequence
from spinlogic import conventions
from spinlogic import dynamics as dyn
from spinlogic.errors import TransportBlocked
from spinlogic.opnmr import PumpConfig, ca_transport, default_lattice, make_lattice, pump_cell
from spinlogic.seqlang import (
    ZComposite, SequenceAST, compile_file, compile_sequence, expand_composite_z, fixture_path,
    optimize_with_stats, parse_file,
)
from spinlogic.spinops import phase_fidelity, unitarity_error

FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "conventions.json").read_text())


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nacceptance {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
        assert ok, f"criterion {number} failed: {detail}"
    return emit


def test_c01_five_rotation_cnot(report):
    start = time.perf_counter()
    u = compile_file(parse_file(fixture_path("cnot_v1.pseq"))).matrix
    elapsed = time.perf_counter() - start
    err = np.max(np.abs(u - SQRT_MINUS_I_CNOT))
    report(1, "cnot_v1 equals sqrt(-i) CNOT", err <= 1e-10 and elapsed < 1.0,
           f"max|diff| = {err:.2e}, {elapsed * 1e3:.1f} ms")


def test_c02_three_event_cnot(report):
    u = compile_file(parse_file(fixture_path("cnot_v2.pseq"))).matrix
    err = np.max(np.abs(u - CNOT_V2))
    report(2, "cnot_v2 equals its reference phase matrix", err <= 1e-10, f"max|diff| = {err:.2e}")


def test_c03_coupling_closed_form(report):
    sys = dyn.default_system(j_hz=100.0)
    u = dyn.delay_propagator(sys, 1 / (2 * 100.0))
    want = math.sqrt(2) / 2 * np.diag([1 + 1j, 1 - 1j, 1 - 1j, 1 + 1j])
    err = np.max(np.abs(u - want))
    report(3, "coupling propagator at tau = 1/(2J)", err <= 1e-12, f"max|diff| = {err:.2e}")


def test_c04_unitarity(report):
    rng = np.random.default_rng(4)
    sys = SYSTEM.to_spin_system()
    worst = max(unitarity_error(compile_sequence(random_sequence(rng), sys).matrix) for _ in range(200))
    report(4, "200 random sequences compile to unitaries", worst <= 1e-10, f"worst ||U'U - I|| = {worst:.2e}")


def test_c05_composite_z(report):
    rng = np.random.default_rng(5)
    sys = SYSTEM.to_spin_system()
    worst = 0.0
    for deg in rng.uniform(-720, 720, size=20):
        for target in ("A", "B"):
            z = SequenceAST("z", (ZComposite(target, float(deg)),))
            diff = compile_sequence(expand_composite_z(z), sys).matrix - compile_sequence(z, sys).matrix
            worst = max(worst, float(np.max(np.abs(diff))))
    report(5, "composite-z expansion is exact", worst <= 1e-12, f"worst max|diff| = {worst:.2e} over 20 angles")


def test_c06_optimizer_soundness(report):
    rng = np.random.default_rng(6)
    sys = SYSTEM.to_spin_system()
    worst, grew, removed = 1.0, 0, 0
    for _ in range(100):
        seq = random_sequence(rng, nice=True)
        out, _ = optimize_with_stats(seq, sys)
        grew += len(out) > len(seq)
        removed += len(seq) - len(out)
        worst = min(worst, phase_fidelity(compile_sequence(seq, sys).matrix, compile_sequence(out, sys).matrix))
    report(6, "optimizer preserves the gate", worst >= 1 - 1e-9 and grew == 0,
           f"min fidelity = {worst:.12f}, {removed} events removed, {grew} grew")


def test_c07_conditional_flip_truth_table(report):
    bw = 1e3
    table = conditional_flip_table(bw, coupling_A=10 * bw)
    fid = truth_table_fidelity(table)
    report(7, "Overhauser conditional flip is a CNOT", fid >= 0.999, f"truth-table fidelity = {fid:.6f} (A rho = 10 bw)")


def test_c08_spectrum(report):
    details, ok = [], True
    for j in (10.0, 50.0, 100.0):
        sys = dyn.default_system(j_hz=j)
        params = dyn.RelaxationParams.uniform(sys.labels, 1e6, 1.0)
        state = dyn.evolve(dyn.thermal_state(sys), dyn.rotation_propagator(sys, "I", "y", math.pi / 2))
        spec = dyn.fid_and_spectrum(state, sys, params, "I", 4096, 1e-3)
        peaks = dyn.find_peaks(spec)
        split = peaks[-1].frequency_hz - peaks[0].frequency_hz if len(peaks) == 2 else float("nan")
        ok &= spec.resolution_hz <= 1.0 and abs(split - j) <= spec.resolution_hz
        details.append(f"J={j:g}: {split:.3f} Hz")
    sys = dyn.default_system()
    params = dyn.RelaxationParams.uniform(sys.labels, 1e6, 20.0)
    heights = []
    for st in (dyn.thermal_state(sys), dyn.hyperpolarized_state(sys, "S", 1e5)):
        st = dyn.evolve(st, dyn.rotation_propagator(sys, "S", "y", math.pi / 2))
        heights.append(max(p.height for p in dyn.find_peaks(dyn.fid_and_spectrum(st, sys, params, "S"))))
    ratio = heights[1] / heights[0]
    ok &= abs(ratio / 1e5 - 1) <= 1e-6
    report(8, "doublet splitting and hyperpolarized gain", ok, ", ".join(details) + f"; ratio = {ratio:.6e}")


def test_c09_linear_transport(report):
    hops = {n: ca_transport(make_lattice(n), 0, n - 1).hops for n in range(2, 17)}
    linear = all(h == n - 1 for n, h in hops.items())
    blocked_at = None
    try:
        ca_transport(pump_cell(default_lattice(), 2, PumpConfig(power=0.0)), 0, 4)
    except TransportBlocked as exc:
        blocked_at = exc.cell
    report(9, "transport hops grow as N - 1", linear and blocked_at == 2,
           f"hops for N=2..16: {list(hops.values())}; unpumped cell blocks at {blocked_at}")


def test_c10_convention_freeze(report):
    _, matching = conventions.search_conventions(atol=1e-10)
    frozen = conventions.frozen()
    ok = (len(matching) == 1 and matching[0].key == FIXTURE["selected"] == frozen.key)
    report(10, "sign conventions frozen", ok, f"{len(matching)} of 8 match; selected {matching[0].key if matching else None}")
