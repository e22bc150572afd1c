"""Compile a sequence to its propagator."""
from dataclasses import dataclass

import numpy as np

from ..dynamics import coupling_propagator, delay_propagator, rotation_propagator
from .syntax import Couple, Delay, Pulse, ZComposite


@dataclass(frozen=True, eq=False)
class CompiledUnitary:
    matrix: np.ndarray
    event_count: int
    total_duration: float  # seconds; pulses take no time

    @property
    def dim(self):
        return self.matrix.shape[0]


def event_propagator(ev, sys):
    if isinstance(ev, Pulse):
        return rotation_propagator(sys, ev.target, ev.axis, ev.radians)
    if isinstance(ev, ZComposite):
        return rotation_propagator(sys, ev.target, "z", ev.radians)
    if isinstance(ev, Delay):
        return delay_propagator(sys, ev.duration, refocus_offsets=ev.refocus)
    if isinstance(ev, Couple):
        return coupling_propagator(sys, (ev.a, ev.b), ev.radians)
    raise TypeError(f"not an event: {ev!r}")


def compile_sequence(seq, sys):
    """``U = U_n ... U_2 U_1`` for events listed first to last."""
    u = np.eye(sys.dim, dtype=complex)
    duration = 0.0
    for ev in seq.events:
        u = event_propagator(ev, sys) @ u
        if isinstance(ev, Delay):
            duration += ev.duration
    return CompiledUnitary(u, len(seq.events), duration)


def compile_file(program, name=None, sys=None):
    sys = sys if sys is not None else program.spin_system
    return compile_sequence(program.sequence(name), sys)
