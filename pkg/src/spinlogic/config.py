"""Shared tolerances and physical constants."""
from dataclasses import dataclass

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J/K


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances used by checks throughout the package.

    ``construction`` guards structural properties (Hermiticity, trace,
    unitarity of freshly built operators). ``equivalence`` is the entrywise
    bound for comparing compiled gates. ``phase`` bounds how far a phase
    fidelity may sit below 1 and still count as equivalent.
    """

    construction: float = 1e-12
    equivalence: float = 1e-10
    phase: float = 1e-9


TOL = Tolerances()

# gyromagnetic ratios, rad s^-1 T^-1
GAMMA = {
    "1H": 2.6752e8,
    "13C": 6.728e7,
    "31P": 1.0839e8,
    "129Xe": -7.452e7,
}

# hyperpolarized 129Xe, low-temperature solid
XE_ENHANCEMENT = 1e5
XE_T1_HOURS = 500.0
XE_LINEWIDTH_HZ = 20.0
XE_FIELD_T = 0.1  # 1 kG
XE_TEMPERATURE_K = 20.0

# sample preparation (recorded only, not simulated)
PUMP_FIELD_T = 25e-4
HCL_PRESSURE_TORR = 760.0

# optically pumped semiconductor
BAND_GAP_EV = 1.42
P_SAT = 1.0  # relative pump power units
J_MAX_HZ = 50.0
DEFAULT_J_HZ = 100.0
