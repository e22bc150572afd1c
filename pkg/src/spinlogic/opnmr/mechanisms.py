"""Polarization transfer, pumping and Overhauser-shift gate primitives."""
import enum
import math
from dataclasses import dataclass

import numpy as np

from ..config import BAND_GAP_EV, GAMMA, J_MAX_HZ, P_SAT
from ..dynamics import rotation_propagator

SIGMA_PLUS = "sigma+"
SIGMA_MINUS = "sigma-"


def saturation(power, p_sat=P_SAT):
    """Bounded monotone response ``P / (P + P_sat)``."""
    if power < 0:
        raise ValueError(f"power must be non-negative, got {power}")
    if power == 0:
        return 0.0
    return power / (power + p_sat)


@dataclass(frozen=True)
class PumpConfig:
    helicity: str = SIGMA_MINUS
    power: float = 0.0  # relative units
    band_gap: float = BAND_GAP_EV  # eV, recorded only
    p_sat: float = P_SAT

    def __post_init__(self):
        if self.helicity not in (SIGMA_PLUS, SIGMA_MINUS):
            raise ValueError(f"helicity must be {SIGMA_PLUS!r} or {SIGMA_MINUS!r}")
        if self.power < 0:
            raise ValueError("pump power must be non-negative")

    @property
    def sign(self):
        # sigma- pumps conduction electrons into m = +1/2
        return 1 if self.helicity == SIGMA_MINUS else -1

    def flipped(self):
        other = SIGMA_PLUS if self.helicity == SIGMA_MINUS else SIGMA_MINUS
        return PumpConfig(other, self.power, self.band_gap, self.p_sat)


def electron_polarization(config):
    """Steady-state ``<S_z>`` of the conduction electrons under a pump."""
    return 0.5 * config.sign * saturation(config.power, config.p_sat)


def cross_polarize(source_pol, target_pol, efficiency):
    """Mix the target polarization toward the source.

    At full efficiency the target takes the source's value and hence its
    sign, as the 1H and 13C polarizations follow 129Xe.
    """
    if not 0.0 <= efficiency <= 1.0:
        raise ValueError(f"efficiency must lie in [0, 1], got {efficiency}")
    return efficiency * source_pol + (1.0 - efficiency) * target_pol


class CPAction(enum.Enum):
    NOOP = "no-op"
    SEQUENCE_A = "sequence-A"
    SEQUENCE_B = "sequence-B"


def cp_gate(xe_sign, h_sign):
    """Choose the cross-polarization action from the signs of the two polarizations."""
    if xe_sign not in (1, -1) or h_sign not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    if xe_sign < 0:
        return CPAction.NOOP
    return CPAction.SEQUENCE_A if h_sign > 0 else CPAction.SEQUENCE_B


def cp_gate_propagator(sys, action, control, target, angle=math.pi):
    """Controlled x rotation of ``target`` for the selected action.

    Sequences A and B rotate in opposite senses; a rotation by pi either way
    is a CNOT up to a phase on the control's ``|1>`` branch.
    """
    if action is CPAction.NOOP:
        return np.eye(sys.dim, dtype=complex)
    sense = 1 if action is CPAction.SEQUENCE_A else -1
    down = 0.5 * np.eye(sys.dim) - sys.op("z", control)
    up = np.eye(sys.dim) - down
    return up + down @ rotation_propagator(sys, target, "x", sense * angle)


@dataclass(frozen=True)
class OverhauserModel:
    coupling_A: float = 1e5  # Hz per unit rho * <S_z>
    density_rho: float = 1.0  # electron density envelope at the nucleus
    gamma: float = GAMMA["31P"]
    b0: float = 2.0  # T

    def __post_init__(self):
        if self.density_rho < 0:
            raise ValueError("electron density must be non-negative")


def _check_sz(electron_sz):
    if abs(electron_sz) > 0.5 + 1e-15:
        raise ValueError(f"|<S_z>| must not exceed 1/2, got {electron_sz}")


def overhauser_shift(model, electron_sz):
    """``A * rho * <S_z>`` in Hz."""
    _check_sz(electron_sz)
    return model.coupling_A * model.density_rho * electron_sz


def larmor_frequency(gamma, field):
    return gamma * field / (2 * math.pi)


def resonance_frequency(model, electron_sz):
    return larmor_frequency(model.gamma, model.b0) + overhauser_shift(model, electron_sz)


def mediated_coupling(power, j_max=J_MAX_HZ, p_sat=P_SAT):
    """Laser-mediated nucleus-nucleus coupling in Hz; zero without pumping."""
    return j_max * saturation(power, p_sat)
