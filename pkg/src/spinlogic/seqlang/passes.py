"""Sequence rewrites: composite-z expansion and pulse-count reduction."""
import math
from dataclasses import replace

from ..conventions import ROTATION_SIGN, Z_SIGN
from .syntax import Delay, Pulse, SequenceAST, ZComposite

FULL_TURN = 720.0  # degrees; a spin-1/2 rotation is the identity only after 4 pi
_ANGLE_ATOL = 1e-9


def expand_z(ev):
    """Three x/y pulses equal (not just up to phase) to the z rotation ``ev``.

    Conjugating an x rotation by a quarter turn about y maps Ix onto Iz.
    """
    quarter = 90.0 * ROTATION_SIGN
    x_angle = ev.degrees * Z_SIGN * ROTATION_SIGN
    return (
        Pulse(ev.target, "y", -quarter, ev.pos),
        Pulse(ev.target, "x", x_angle, ev.pos),
        Pulse(ev.target, "y", quarter, ev.pos),
    )


def expand_composite_z(seq):
    events = []
    for ev in seq.events:
        events.extend(expand_z(ev) if isinstance(ev, ZComposite) else (ev,))
    return SequenceAST(seq.name, tuple(events))


def _is_identity_angle(deg):
    r = math.fmod(deg, FULL_TURN)
    return abs(r) <= _ANGLE_ATOL or abs(abs(r) - FULL_TURN) <= _ANGLE_ATOL


def _same_rotation(a, b):
    if isinstance(a, Pulse) and isinstance(b, Pulse):
        return a.target == b.target and a.axis == b.axis
    if isinstance(a, ZComposite) and isinstance(b, ZComposite):
        return a.target == b.target
    return False


def _cancel_inverses(events):
    out, changed, i = [], False, 0
    while i < len(events):
        if (i + 1 < len(events) and _same_rotation(events[i], events[i + 1])
                and _is_identity_angle(events[i].degrees + events[i + 1].degrees)):
            i += 2
            changed = True
            continue
        out.append(events[i])
        i += 1
    return out, changed


def _merge(events):
    out, changed = [], False
    for ev in events:
        if out and _same_rotation(out[-1], ev):
            prev = out.pop()
            out.append(replace(prev, degrees=prev.degrees + ev.degrees))
            changed = True
        else:
            out.append(ev)
    return out, changed


def _drop_null(events):
    out = []
    for ev in events:
        if isinstance(ev, (Pulse, ZComposite)) and _is_identity_angle(ev.degrees):
            continue
        if isinstance(ev, Delay) and ev.duration == 0:
            continue
        out.append(ev)
    return out, len(out) != len(events)


PASSES = (_cancel_inverses, _merge, _drop_null)


def optimize_with_stats(seq, sys=None):
    """Run the rewrite passes to a fixpoint; return ``(sequence, rounds)``.

    ``sys`` is accepted for interface symmetry with the compiler; the
    rewrites are purely syntactic and hold for every spin system.
    """
    events = list(seq.events)
    rounds = 0
    while True:
        rounds += 1
        changed = False
        for rewrite in PASSES:
            events, fired = rewrite(events)
            changed |= fired
        if not changed:
            return SequenceAST(seq.name, tuple(events)), rounds


def optimize(seq, sys=None):
    return optimize_with_stats(seq, sys)[0]
