"""Frozen sign and ordering conventions, and the search that fixes them.

A rotation by ``angle`` about ``axis`` is ``exp(i * s * angle * I_axis)``,
with ``s = ROTATION_SIGN`` for x/y and ``s = Z_SIGN`` for z. Free evolution
under ``H`` for time ``t`` is ``exp(i * ROTATION_SIGN * H * t)``. Spins are
tensored in declaration order, and the CNOT construction
``Ry_A(-90) Rz_B(-90) Rz_A(-90) Rzz(90) Ry_A(90)`` reproduces
``sqrt(-i) * CNOT`` only when the control spin B is the first factor.

``search_conventions`` enumerates every combination of the three choices and
reports which reproduce that target; exactly one does.
"""
import itertools
from dataclasses import dataclass

import numpy as np

from .spinops import CNOT, expm_hermitian, spin_operator

ROTATION_SIGN = 1
Z_SIGN = 1
CONTROL_FIRST = True


@dataclass(frozen=True)
class Convention:
    rotation_sign: int
    z_sign: int
    control_first: bool
    max_error: float

    @property
    def key(self):
        order = "control-first" if self.control_first else "target-first"
        return f"s={self.rotation_sign:+d},sz={self.z_sign:+d},{order}"


def cnot_construction(rotation_sign, z_sign, control_first):
    """Five-operator CNOT product under the given convention choice."""
    control, target = (0, 1) if control_first else (1, 0)

    def rot(axis, spin, angle):
        sign = z_sign if axis == "z" else rotation_sign
        return expm_hermitian(spin_operator(axis, spin, 2), 1j * sign * angle)

    izsz = spin_operator("z", 0, 2) @ spin_operator("z", 1, 2)
    # coupling written with its own fixed +i sign: exp(i 2 pi J tau IzSz)
    rzz = expm_hermitian(izsz, 1j * np.pi)
    h = np.pi / 2
    steps = [
        rot("y", target, h),
        rzz,
        rot("z", target, -h),
        rot("z", control, -h),
        rot("y", target, -h),
    ]
    u = np.eye(4, dtype=complex)
    for step in steps:
        u = step @ u
    return u


def search_conventions(atol=1e-10):
    """Try all 8 convention combinations; return ``(all, matching)``."""
    target = np.sqrt(-1j) * CNOT
    results = []
    for s, sz, first in itertools.product((1, -1), (1, -1), (True, False)):
        u = cnot_construction(s, sz, first)
        results.append(Convention(s, sz, first, float(np.max(np.abs(u - target)))))
    matching = [c for c in results if c.max_error <= atol]
    return results, matching


def frozen():
    return Convention(ROTATION_SIGN, Z_SIGN, CONTROL_FIRST, 0.0)
