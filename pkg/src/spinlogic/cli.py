"""Command-line front end.

Subcommands::

    spinlogic verify FILE [--target cnot|identity|MATRIX] [--mode global|diagonal]
    spinlogic compile FILE [--sequence NAME]
    spinlogic spectrum CONFIG [--state thermal|hyperpolarized] ...
    spinlogic lattice LATTICE SCRIPT

Exit codes: 0 success, 1 check failed or transport blocked, 2 bad input.
Machine-readable results go to files under ``--out`` (or ``$SPINLOGIC_OUT``).
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dynamics
from .config import TOL, XE_ENHANCEMENT, XE_LINEWIDTH_HZ, XE_T1_HOURS, XE_TEMPERATURE_K
from .errors import ParseError, SpinLogicError, TransportBlocked
from .opnmr import PumpConfig, ca_transport, conditional_flip, flips, load_lattice, pump_cell
from .opnmr.lattice import write_trace_csv
from .opnmr.mechanisms import resonance_frequency
from .seqlang import (
    compile_sequence,
    equivalent_global_phase,
    equivalent_up_to_diagonal_phases,
    parse_file,
)
from .spinops import CNOT, phase_fidelity

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    tol: float = TOL.phase
    out: Path = None
    seed: int = 0

    def out_dir(self, default="."):
        path = self.out or os.environ.get("SPINLOGIC_OUT") or default
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        return path


def format_matrix(m):
    def num(x):
        s = f"{x:.6g}" if abs(x) >= 1e-12 else "0"
        return "0" if s in ("0", "-0") else s

    def entry(z):
        return f"{num(z.real)}{'+' if z.imag >= 0 or num(z.imag) == '0' else '-'}{num(abs(z.imag))}j"

    rows = [[entry(z) for z in row] for row in np.asarray(m)]
    width = max(len(e) for row in rows for e in row)
    return "\n".join("  " + "  ".join(e.rjust(width) for e in row) for row in rows)


def _load_matrix(spec, dim):
    if spec == "cnot":
        return CNOT
    if spec == "identity":
        return np.eye(dim, dtype=complex)
    path = Path(spec)
    if path.suffix == ".npy":
        return np.load(path).astype(complex)
    with path.open(encoding="utf-8") as fh:
        doc = json.load(fh)
    rows = doc["matrix"] if isinstance(doc, dict) else doc
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def _matrix_doc(m):
    return {"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]}


def _compile_input(path, name):
    program = parse_file(path)
    seq = program.sequence(name)
    return seq, compile_sequence(seq, program.spin_system)


def cmd_verify(args, cfg):
    seq, compiled = _compile_input(args.file, args.sequence)
    target = _load_matrix(args.target, compiled.dim)
    if target.shape != compiled.matrix.shape:
        raise ValueError(f"target is {target.shape[0]}x{target.shape[1]}, sequence is {compiled.dim}x{compiled.dim}")
    fid = phase_fidelity(compiled.matrix, target)
    glob = equivalent_global_phase(compiled, target, cfg.tol)
    diag = equivalent_up_to_diagonal_phases(compiled, target, cfg.tol)
    ok = glob if args.mode == "global" else diag
    print(f"sequence {seq.name}: {compiled.event_count} events, {compiled.total_duration:.6g} s")
    print("compiled matrix:")
    print(format_matrix(compiled.matrix))
    print(f"target: {args.target}")
    print(f"phase fidelity: {fid:.6f}")
    print(f"global-phase equivalent: {str(glob).lower()}")
    print(f"diagonal-phase equivalent: {str(diag).lower()}")
    print(f"result ({args.mode}): {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_compile(args, cfg):
    seq, compiled = _compile_input(args.file, args.sequence)
    print(f"sequence {seq.name}: {compiled.event_count} events, {compiled.total_duration:.6g} s")
    print(format_matrix(compiled.matrix))
    if cfg.out or os.environ.get("SPINLOGIC_OUT"):
        path = cfg.out_dir() / f"{seq.name}.matrix.json"
        path.write_text(json.dumps(_matrix_doc(compiled.matrix), indent=1) + "\n", encoding="utf-8")
        print(f"wrote {path}")
    return EXIT_OK


def _load_system(path):
    path = Path(path)
    if path.suffix == ".pseq":
        return parse_file(path).spin_system
    return dynamics.load_system(path)


def cmd_spectrum(args, cfg):
    sys_ = _load_system(args.config)
    observe = args.observe or sys_.labels[0]
    sys_.index(observe)
    if args.state == "hyperpolarized":
        target = args.hyperpolarize or observe
        state = dynamics.hyperpolarized_state(sys_, target, args.enhancement, args.sign, args.temperature)
    else:
        state = dynamics.thermal_state(sys_, args.temperature)
    state = dynamics.evolve(state, dynamics.rotation_propagator(sys_, observe, "y", np.pi / 2))
    params = dynamics.RelaxationParams.uniform(sys_.labels, XE_T1_HOURS * 3600.0, args.linewidth)
    spec = dynamics.fid_and_spectrum(state, sys_, params, observe, args.points, args.dwell)
    path = dynamics.write_spectrum_csv(spec, cfg.out_dir() / args.csv)
    peaks = dynamics.find_peaks(spec)
    print(f"observe {observe}, state {args.state}, resolution {spec.resolution_hz:.6g} Hz")
    print(f"{len(peaks)} peak(s):")
    for p in peaks:
        print(f"  {p.frequency_hz:12.4f} Hz  height {p.height:.6g}")
    if len(peaks) == 2:
        print(f"splitting: {peaks[1].frequency_hz - peaks[0].frequency_hz:.4f} Hz")
    print(f"wrote {path}")
    return EXIT_OK


class ScriptError(ValueError):
    pass


def parse_script(text):
    """Lattice script: one command per line, ``#`` comments.

    ``pump CELL sigma+|sigma- POWER``, ``flip CELL FREQ_HZ|resonant BANDWIDTH_HZ``,
    ``transport FROM TO``. Cells are 0-based.
    """
    commands = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        op, rest = words[0], words[1:]
        try:
            if op == "pump" and len(rest) == 3:
                commands.append(("pump", int(rest[0]), rest[1], float(rest[2])))
            elif op == "flip" and len(rest) == 3:
                freq = rest[1] if rest[1] == "resonant" else float(rest[1])
                commands.append(("flip", int(rest[0]), freq, float(rest[2])))
            elif op == "transport" and len(rest) == 2:
                commands.append(("transport", int(rest[0]), int(rest[1])))
            else:
                raise ScriptError(f"line {lineno}: cannot parse {raw.strip()!r}")
        except ValueError as exc:
            if isinstance(exc, ScriptError):
                raise
            raise ScriptError(f"line {lineno}: {exc}") from exc
    return commands


def run_script(lattice, commands):
    """Execute commands in order; return ``(lattice, trace, hops, error)``."""
    trace, hops, step = [], [], 0
    for cmd in commands:
        op, cell = cmd[0], cmd[1]
        lattice.check_index(cell)
        if op == "pump":
            lattice = pump_cell(lattice, cell, PumpConfig(cmd[2], cmd[3], p_sat=lattice.p_sat))
            step += 1
            trace.append((step, cell, f"pump {cmd[2]} {cmd[3]!r}"))
        elif op == "flip":
            c = lattice.cells[cell]
            freq = resonance_frequency(c.overhauser, c.electron_sz) if cmd[2] == "resonant" else cmd[2]
            hit = flips(c, freq, cmd[3])
            lattice = lattice.with_cell(conditional_flip(c, freq, cmd[3]))
            step += 1
            trace.append((step, cell, "flip" if hit else "flip-skipped"))
        else:
            try:
                res = ca_transport(lattice, cell, cmd[2], step0=step)
            except TransportBlocked as exc:
                return lattice, trace, hops, exc
            lattice = res.lattice
            trace.extend(res.trace)
            step += len(res.trace)
            hops.append((cell, cmd[2], res.hops))
    return lattice, trace, hops, None


def cmd_lattice(args, cfg):
    lattice = load_lattice(args.lattice)
    commands = parse_script(Path(args.script).read_text(encoding="utf-8"))
    lattice, trace, hops, error = run_script(lattice, commands)
    path = write_trace_csv(trace, cfg.out_dir() / args.csv)
    print(f"cells: {len(lattice)}, commands: {len(commands)}, trace rows: {len(trace)}")
    for src, dst, n in hops:
        print(f"transport {src} -> {dst}: {n} hops")
    print(f"total hops: {sum(n for _, _, n in hops)}")
    bits = "".join(str(int(round(c.qubit.rho[1, 1].real))) for c in lattice.cells)
    print(f"nuclear bits: {bits}")
    print(f"wrote {path}")
    if error is not None:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="phase-equivalence tolerance")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", type=Path, default=None, help="output directory")

    parser = argparse.ArgumentParser(prog="spinlogic", description=__doc__.split("\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a compiled sequence against a target gate")
    p.add_argument("file")
    p.add_argument("--target", default="cnot", help="cnot, identity, or a .json/.npy matrix file")
    p.add_argument("--sequence", default=None)
    p.add_argument("--mode", choices=("global", "diagonal"), default="global")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compile", parents=[common], help="print the compiled propagator")
    p.add_argument("file")
    p.add_argument("--sequence", default=None)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("spectrum", parents=[common], help="simulate a 90-degree pulse and acquire a spectrum")
    p.add_argument("config", help="spin-system .json or a .pseq file")
    p.add_argument("--state", choices=("thermal", "hyperpolarized"), default="thermal")
    p.add_argument("--observe", default=None)
    p.add_argument("--hyperpolarize", default=None, help="spin to enhance (default: observed spin)")
    p.add_argument("--enhancement", type=float, default=XE_ENHANCEMENT)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--temperature", type=float, default=XE_TEMPERATURE_K)
    p.add_argument("--linewidth", type=float, default=XE_LINEWIDTH_HZ)
    p.add_argument("--points", type=int, default=4096)
    p.add_argument("--dwell", type=float, default=1e-3)
    p.add_argument("--csv", default="spectrum.csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("lattice", parents=[common], help="run a pump/flip/transport script on a lattice")
    p.add_argument("lattice")
    p.add_argument("script")
    p.add_argument("--csv", default="trace.csv")
    p.set_defaults(func=cmd_lattice)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        inputs=[v for k, v in vars(args).items() if k in ("file", "config", "lattice", "script")],
        tol=args.tol if args.tol is not None else TOL.phase,
        out=args.out,
        seed=args.seed if args.seed is not None else 0,
    )
    for path in cfg.inputs:
        if not Path(path).exists():
            print(f"error: no such file: {path}", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args, cfg)
    except ParseError as exc:
        print(f"error: {args_file(args)}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SpinLogicError, ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def args_file(args):
    return getattr(args, "file", None) or getattr(args, "config", None) or getattr(args, "script", "")


if __name__ == "__main__":
    sys.exit(main())
