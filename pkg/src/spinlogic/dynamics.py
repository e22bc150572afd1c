"""Rotating-frame Hamiltonians, propagators, ensemble states and readout.

Pulses are hard (instantaneous) rotations. Free evolution follows the sign
convention frozen in :mod:`spinlogic.conventions`.
"""
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

import numpy as np

from . import _backend
from .config import GAMMA, HBAR, K_B, TOL, XE_FIELD_T, XE_TEMPERATURE_K
from .conventions import ROTATION_SIGN, Z_SIGN
from .errors import NotUnitaryError, UnknownSpinError
from .spinops import AXES, eigh, expm_hermitian, is_hermitian, is_unitary, spin_operator


@dataclass(frozen=True)
class Spin:
    label: str
    isotope: str
    gamma: float  # rad s^-1 T^-1


@dataclass(frozen=True)
class SpinSystem:
    """Labeled spin-1/2 nuclei with offsets (rad/s) and scalar couplings (Hz).

    Couplings are keyed by label pairs in declaration order; the tensor
    product follows declaration order too.
    """

    spins: tuple
    offsets: dict = field(default_factory=dict)
    couplings: dict = field(default_factory=dict)
    b0: float = XE_FIELD_T

    def __post_init__(self):
        spins = tuple(self.spins)
        labels = [s.label for s in spins]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate spin labels in {labels}")
        if not 1 <= len(spins) <= 3:
            raise ValueError("between one and three spins are supported")
        order = {lab: i for i, lab in enumerate(labels)}
        offsets = {}
        for lab, omega in self.offsets.items():
            if lab not in order:
                raise UnknownSpinError(f"offset for undeclared spin {lab!r}")
            offsets[lab] = float(omega)
        couplings = {}
        for pair, j in self.couplings.items():
            a, b = pair
            for lab in (a, b):
                if lab not in order:
                    raise UnknownSpinError(f"coupling references undeclared spin {lab!r}")
            if a == b:
                raise ValueError(f"spin {a!r} cannot couple to itself")
            key = (a, b) if order[a] < order[b] else (b, a)
            if key in couplings and couplings[key] != float(j):
                raise ValueError(f"conflicting J values for pair {key}")
            couplings[key] = float(j)
        object.__setattr__(self, "spins", spins)
        object.__setattr__(self, "offsets", MappingProxyType(offsets))
        object.__setattr__(self, "couplings", MappingProxyType(couplings))

    @classmethod
    def build(cls, spins, offsets_hz=None, couplings_hz=None, b0=XE_FIELD_T):
        """Convenience constructor from ``(label, isotope[, gamma])`` tuples and Hz values."""
        built = []
        for entry in spins:
            label, isotope, *rest = entry
            gamma = rest[0] if rest else _lookup_gamma(isotope)
            built.append(Spin(label, isotope, float(gamma)))
        offsets = {k: 2 * math.pi * v for k, v in (offsets_hz or {}).items()}
        return cls(tuple(built), offsets, dict(couplings_hz or {}), float(b0))

    @property
    def labels(self):
        return tuple(s.label for s in self.spins)

    @property
    def nspins(self):
        return len(self.spins)

    @property
    def dim(self):
        return 2 ** len(self.spins)

    def index(self, label):
        for i, s in enumerate(self.spins):
            if s.label == label:
                return i
        raise UnknownSpinError(f"unknown spin {label!r}")

    def spin(self, label):
        return self.spins[self.index(label)]

    def offset(self, label):
        self.index(label)
        return self.offsets.get(label, 0.0)

    def coupling(self, a, b):
        """J in Hz for the pair, or ``None`` when the pair is uncoupled."""
        ia, ib = self.index(a), self.index(b)
        key = (a, b) if ia < ib else (b, a)
        return self.couplings.get(key)

    def op(self, axis, label):
        return spin_operator(axis, self.index(label), self.nspins)

    def replace(self, **changes):
        kw = dict(spins=self.spins, offsets=dict(self.offsets),
                  couplings=dict(self.couplings), b0=self.b0)
        kw.update(changes)
        return SpinSystem(**kw)


def _lookup_gamma(isotope):
    try:
        return GAMMA[isotope]
    except KeyError:
        raise ValueError(f"no gyromagnetic ratio known for {isotope!r}; give one explicitly") from None


def default_system(j_hz=100.0, b0=XE_FIELD_T):
    """1H (I) and 129Xe (S), on resonance, weakly coupled."""
    return SpinSystem.build([("I", "1H"), ("S", "129Xe")], couplings_hz={("I", "S"): j_hz}, b0=b0)


def system_to_dict(sys):
    return {
        "b0": sys.b0,
        "spins": [{"label": s.label, "isotope": s.isotope, "gamma": s.gamma} for s in sys.spins],
        "offsets": dict(sys.offsets),
        "couplings": [{"pair": list(k), "j": v} for k, v in sys.couplings.items()],
    }


def system_from_dict(doc):
    """Build a system from the JSON document layout written by :func:`system_to_dict`.

    ``offsets`` are in rad/s; ``offsets_hz`` is accepted as an alternative.
    """
    try:
        spins = []
        for s in doc["spins"]:
            gamma = s.get("gamma")
            spins.append(Spin(s["label"], s["isotope"],
                              float(gamma) if gamma is not None else _lookup_gamma(s["isotope"])))
        offsets = {k: float(v) for k, v in doc.get("offsets", {}).items()}
        for k, v in doc.get("offsets_hz", {}).items():
            offsets[k] = 2 * math.pi * float(v)
        couplings = {tuple(c["pair"]): float(c["j"]) for c in doc.get("couplings", [])}
        return SpinSystem(tuple(spins), offsets, couplings, float(doc.get("b0", XE_FIELD_T)))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed spin-system document: {exc}") from exc


def load_system(path):
    with open(path, encoding="utf-8") as fh:
        return system_from_dict(json.load(fh))


@dataclass(frozen=True)
class PulseSpec:
    target: str
    axis: str
    angle: float  # rad
    omega1: float = 0.0  # rad/s, only used by hamiltonian()

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"invalid axis {self.axis!r}")
        if not math.isfinite(self.angle):
            raise ValueError("pulse angle must be finite")


def hamiltonian(sys, active_pulses=()):
    """Rotating-frame Hamiltonian in rad/s.

    Zeeman offsets ``Omega_k Iz_k``, weak couplings ``2 pi J IzSz`` and an rf
    term ``omega1 I_axis`` for each active pulse.
    """
    h = np.zeros((sys.dim, sys.dim), dtype=complex)
    for label, omega in sys.offsets.items():
        h += omega * sys.op("z", label)
    for (a, b), j in sys.couplings.items():
        h += 2 * math.pi * j * sys.op("z", a) @ sys.op("z", b)
    for p in active_pulses:
        h += p.omega1 * sys.op(p.axis, p.target)
    return h


def rotation_propagator(sys, target, axis, angle):
    """Ideal hard-pulse rotation of one spin by ``angle`` radians."""
    if axis not in AXES:
        raise ValueError(f"invalid axis {axis!r}")
    sign = Z_SIGN if axis == "z" else ROTATION_SIGN
    return expm_hermitian(sys.op(axis, target), 1j * sign * angle)


def coupling_propagator(sys, pair, theta):
    """Closed-form coupling evolution ``cos(theta/2) + i sin(theta/2) 4 Iz Sz``.

    ``theta = pi J tau``; ``theta = pi/2`` is a delay of ``1/(2J)``.
    """
    a, b = pair
    if sys.coupling(a, b) is None:
        raise UnknownSpinError(f"no coupling declared between {a!r} and {b!r}")
    zz = 4 * sys.op("z", a) @ sys.op("z", b)
    return math.cos(theta / 2) * np.eye(sys.dim) + 1j * math.sin(theta / 2) * zz


def delay_propagator(sys, duration, refocus_offsets=False):
    """Free precession for ``duration`` seconds.

    With ``refocus_offsets`` the Zeeman terms are dropped, leaving only the
    couplings (ideal refocusing).
    """
    if duration < 0:
        raise ValueError(f"negative delay {duration}")
    h = hamiltonian(sys.replace(offsets={}) if refocus_offsets else sys)
    return expm_hermitian(h, 1j * ROTATION_SIGN * duration)


@dataclass(frozen=True, eq=False)
class DensityState:
    """Ensemble density matrix with per-spin equilibrium polarizations.

    ``polarization`` is read back from ``rho`` as ``4 tr(Iz_k rho)``, which is
    the ``epsilon_k`` of ``rho = (1 + sum_k epsilon_k Iz_k) / dim``.
    """

    rho: np.ndarray
    labels: tuple
    equilibrium: tuple = None

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        rho.setflags(write=False)
        n = len(self.labels)
        if rho.shape != (2 ** n, 2 ** n):
            raise ValueError(f"rho shape {rho.shape} does not match {n} spins")
        if abs(np.trace(rho) - 1) > TOL.construction:
            raise ValueError(f"trace(rho) = {np.trace(rho)} is not 1")
        if not is_hermitian(rho, TOL.construction):
            raise ValueError("rho is not Hermitian")
        w, _ = eigh(rho)
        if w[0] < -TOL.construction:
            raise ValueError(f"rho is not positive semidefinite (min eigenvalue {w[0]:.3g})")
        eq = tuple(float(x) for x in self.equilibrium) if self.equilibrium is not None else (0.0,) * n
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "equilibrium", eq)

    def _iz(self, k):
        return spin_operator("z", k, len(self.labels))

    @property
    def polarization(self):
        return tuple(4 * float(np.trace(self._iz(k) @ self.rho).real) for k in range(len(self.labels)))

    def polarization_of(self, label):
        return self.polarization[self.labels.index(label)]

    def with_polarization(self, values):
        """Replace the longitudinal components, leaving everything else intact."""
        rho = np.array(self.rho)
        dim = rho.shape[0]
        for k, (old, new) in enumerate(zip(self.polarization, values)):
            rho += (new - old) * self._iz(k) / dim
        return DensityState(rho, self.labels, self.equilibrium)


def state_from_polarization(labels, epsilons, equilibrium=None):
    n = len(labels)
    dim = 2 ** n
    rho = np.eye(dim, dtype=complex) / dim
    for k, eps in enumerate(epsilons):
        rho += eps * spin_operator("z", k, n) / dim
    return DensityState(rho, tuple(labels), equilibrium)


def thermal_epsilon(sys, temperature):
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return tuple(s.gamma * HBAR * sys.b0 / (K_B * temperature) for s in sys.spins)


def thermal_state(sys, temperature=XE_TEMPERATURE_K):
    """High-temperature equilibrium state, first order in ``epsilon``."""
    eps = thermal_epsilon(sys, temperature)
    return state_from_polarization(sys.labels, eps, eps)


def hyperpolarized_state(sys, label, enhancement, sign=1, temperature=XE_TEMPERATURE_K):
    """Thermal state with one spin's polarization scaled by ``sign * enhancement``.

    The sign models the pump-laser helicity. The equilibrium stays thermal, so
    T1 decay returns the spin toward the unenhanced value.
    """
    if not enhancement > 0:
        raise ValueError("enhancement must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    eps = list(thermal_epsilon(sys, temperature))
    k = sys.index(label)
    eq = tuple(eps)
    eps[k] *= sign * enhancement
    return state_from_polarization(sys.labels, eps, eq)


def evolve(state, u):
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, TOL.equivalence):
        raise NotUnitaryError("propagator is not unitary")
    return DensityState(u @ state.rho @ u.conj().T, state.labels, state.equilibrium)


@dataclass(frozen=True)
class RelaxationParams:
    t1: dict  # label -> seconds
    linewidth: dict  # label -> Hz, Lorentzian FWHM

    def __post_init__(self):
        for lab, v in self.t1.items():
            if not v > 0:
                raise ValueError(f"T1 for {lab!r} must be positive")
        for lab, v in self.linewidth.items():
            if v < 0:
                raise ValueError(f"linewidth for {lab!r} must be non-negative")

    @classmethod
    def uniform(cls, labels, t1, linewidth):
        return cls({lab: t1 for lab in labels}, {lab: linewidth for lab in labels})


def t1_decay(state, params, elapsed):
    """Relax each spin's longitudinal polarization toward equilibrium."""
    if elapsed < 0:
        raise ValueError("elapsed time must be non-negative")
    new = []
    for lab, p, peq in zip(state.labels, state.polarization, state.equilibrium):
        t1 = params.t1.get(lab, math.inf)
        new.append(peq + (p - peq) * math.exp(-elapsed / t1))
    return state.with_polarization(new)


@dataclass(frozen=True, eq=False)
class Spectrum:
    time: np.ndarray
    fid: np.ndarray
    frequency_hz: np.ndarray
    values: np.ndarray

    @property
    def resolution_hz(self):
        return float(self.frequency_hz[1] - self.frequency_hz[0])


@dataclass(frozen=True)
class Peak:
    frequency_hz: float
    height: float


def fid_and_spectrum(state, sys, params, observe, n_points=4096, dwell=1e-3):
    """Free-induction decay of one spin and its Fourier spectrum.

    Detection uses ``Ix - i s Iy`` with ``s`` the frozen rotation sign, so a
    spin at offset ``Omega`` peaks at ``+Omega / 2 pi``.
    """
    if n_points < 2 or n_points & (n_points - 1):
        raise ValueError(f"n_points must be a power of two, got {n_points}")
    if not dwell > 0:
        raise ValueError("dwell must be positive")
    obs = sys.op("x", observe) - 1j * ROTATION_SIGN * sys.op("y", observe)
    w, v = eigh(hamiltonian(sys))
    rho_e = v.conj().T @ state.rho @ v
    obs_e = v.conj().T @ obs @ v
    # in the eigenbasis rho_mn(t) = rho_mn exp(i s (w_m - w_n) t)
    amps = (obs_e.T * rho_e).ravel()
    omegas = (ROTATION_SIGN * (w[:, None] - w[None, :])).ravel()
    keep = np.abs(amps) > 0
    damping = math.pi * params.linewidth.get(observe, 0.0)
    fid = _backend.fid_accumulate(amps[keep], omegas[keep], dwell, n_points, damping)
    weighted = fid.copy()
    weighted[0] *= 0.5
    values = np.fft.fftshift(np.fft.fft(weighted)) * dwell
    freqs = np.fft.fftshift(np.fft.fftfreq(n_points, dwell))
    return Spectrum(np.arange(n_points) * dwell, fid, freqs, values)


def find_peaks(spectrum, rel_threshold=0.1, mode="real"):
    """Local maxima of the spectrum, refined by a parabola through three bins.

    ``mode="real"`` removes the phase of the first FID point, making in-phase
    lines absorptive and positive, and picks absorption peaks, which is unbiased for in-phase lines.
    ``"magnitude"`` is phase-insensitive but overlapping dispersion tails
    push close lines apart.
    """
    if mode == "real":
        ref = spectrum.fid[0]
        if ref == 0:
            ref = spectrum.values[np.argmax(np.abs(spectrum.values))]
        mag = (spectrum.values * np.exp(-1j * np.angle(ref))).real
    elif mode == "magnitude":
        mag = np.abs(spectrum.values)
    else:
        raise ValueError(f"mode must be 'real' or 'magnitude', got {mode!r}")
    top = mag.max()
    if top <= 0:
        return []
    floor = rel_threshold * top
    df = spectrum.resolution_hz
    peaks = []
    for k in range(1, len(mag) - 1):
        if mag[k] >= floor and mag[k] > mag[k - 1] and mag[k] >= mag[k + 1]:
            a, b, c = mag[k - 1], mag[k], mag[k + 1]
            denom = a - 2 * b + c
            shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
            peaks.append(Peak(float(spectrum.frequency_hz[k] + shift * df), float(b)))
    return peaks


def write_spectrum_csv(spectrum, path):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["frequency_hz", "real", "imag", "magnitude"])
        for f, z in zip(spectrum.frequency_hz, spectrum.values):
            writer.writerow([repr(float(f)), repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z)))])
    return path
