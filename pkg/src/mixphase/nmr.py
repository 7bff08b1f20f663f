"""NMR acquisition back end: J-coupled Hamiltonian, FID, spectrum, phase integration.

Frequencies are in the rotating frame of each spin. The probe signal is
``Tr[rho(t) sigma_minus]`` with ``sigma_minus = (sigma_x - i sigma_y)/2`` on the
probe. That signal is the complex conjugate of the interference amplitude, so
the readout chain conjugates the FID once before transforming it. After that,
spectral phases and circuit phases carry the same sign.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .circuit import (
    ANCILLA,
    PROBE,
    SYSTEM,
    PseudoPureConfig,
    Register3,
    cnot,
    embed,
    final_register,
    prep_rotation,
    pseudo_hadamard,
    run_sequence,
)
from .phases import TWO_PI, UNDEFINED_BELOW, AncillaScheme, PhaseResult
from .purification import MixedQubit

SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
# computational configurations of (system, ancilla) present in the purification
PURIFIED_CONFIGS = ((0, 0), (1, 1))


@dataclass(frozen=True)
class SpinSystem:
    """Rotating-frame offsets (rad/s) and scalar couplings (Hz) of the three spins."""

    larmor_offsets: tuple[float, float, float] = (0.0, 0.0, 0.0)
    j12: float = -1.3
    j13: float = 54.1
    j23: float = 34.9

    def __post_init__(self):
        vals = (*self.larmor_offsets, self.j12, self.j13, self.j23)
        if len(self.larmor_offsets) != 3 or not all(math.isfinite(v) for v in vals):
            raise ValueError("spin system needs three finite offsets and finite couplings")

    def coupling(self, i: int, j: int) -> float:
        return {(0, 1): self.j12, (0, 2): self.j13, (1, 2): self.j23}[tuple(sorted((i, j)))]


@dataclass(frozen=True)
class AcquisitionConfig:
    dwell: float = 2e-3
    npoints: int = 4096
    t2: float = 0.5
    # integration half-width in units of the full linewidth 1/(pi t2)
    window_linewidths: float = 2.0
    # centre distance (Hz) of the two flanking baseline windows; 0 disables correction
    baseline_offset: float = 5.0

    def __post_init__(self):
        if not self.dwell > 0:
            raise ValueError(f"dwell must be positive, got {self.dwell!r}")
        if self.npoints < 2 or self.npoints & (self.npoints - 1):
            raise ValueError(f"npoints must be a power of two, got {self.npoints!r}")
        if not self.t2 > 0:
            raise ValueError(f"t2 must be positive, got {self.t2!r}")
        if not self.window_linewidths > 0 or self.baseline_offset < 0:
            raise ValueError("window width must be positive and baseline offset non-negative")

    @property
    def linewidth(self) -> float:
        """Full width at half maximum of a line, Hz."""
        return 1.0 / (math.pi * self.t2)

    def times(self) -> np.ndarray:
        return np.arange(self.npoints) * self.dwell


@dataclass(frozen=True)
class FID:
    samples: np.ndarray
    dwell: float

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.dwell

    def conjugate(self) -> "FID":
        return FID(self.samples.conj(), self.dwell)

    def rotated(self, phi: float) -> "FID":
        return FID(self.samples * np.exp(1j * phi), self.dwell)


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray
    freq_axis: np.ndarray

    @property
    def bin_width(self) -> float:
        return float(self.freq_axis[1] - self.freq_axis[0])

    def integrate(self, lo: float, hi: float) -> complex:
        """Integral over [lo, hi] of the linearly interpolated spectrum, in bin units.

        Window edges may fall between bins; the interpolant makes the result
        depend continuously on them, so a window centred on a line is
        integrated symmetrically even when the line sits off-grid.
        """
        f = self.freq_axis
        if not (f[0] <= lo < hi <= f[-1]):
            raise ValueError(f"window [{lo}, {hi}] not inside [{f[0]}, {f[-1]}]")
        inner = (f > lo) & (f < hi)
        x = np.concatenate(([lo], f[inner], [hi]))
        re = np.interp(x, f, self.values.real)
        im = np.interp(x, f, self.values.imag)
        return complex(np.trapezoid(re + 1j * im, x)) / self.bin_width

    def total(self) -> complex:
        """Sum over every bin; equals ``npoints * fid[0]``."""
        return complex(self.values.sum())


def _spin_z(index: int) -> np.ndarray:
    return embed(np.diag([0.5, -0.5]).astype(complex), index)


def internal_hamiltonian(sys: SpinSystem) -> np.ndarray:
    """sum_i w_i Iz_i + 2 pi sum_{i<j} J_ij Iz_i Iz_j, in rad/s."""
    iz = [_spin_z(i) for i in range(3)]
    h = sum(w * z for w, z in zip(sys.larmor_offsets, iz))
    for i in range(3):
        for j in range(i + 1, 3):
            h = h + TWO_PI * sys.coupling(i, j) * iz[i] @ iz[j]
    return np.asarray(h, dtype=complex)


def multiplet_lines(sys: SpinSystem) -> dict[tuple[int, int], float]:
    """Probe line positions (Hz, conjugated-FID frame) keyed by the (system, ancilla) bits."""
    w1 = sys.larmor_offsets[0] / TWO_PI
    lines = {}
    for b2 in (0, 1):
        for b3 in (0, 1):
            m2, m3 = 0.5 - b2, 0.5 - b3
            lines[(b2, b3)] = w1 + sys.j12 * m2 + sys.j13 * m3
    return lines


def integration_windows(
    sys: SpinSystem, cfg: AcquisitionConfig, configs: Iterable[tuple[int, int]] = PURIFIED_CONFIGS
) -> list[tuple[float, float]]:
    lines = multiplet_lines(sys)
    half = cfg.window_linewidths * cfg.linewidth
    return sorted((lines[c] - half, lines[c] + half) for c in configs)


def acquire_fid(reg: Register3, sys: SpinSystem, cfg: AcquisitionConfig) -> FID:
    """samples[k] = Tr[rho(t_k) sigma_minus_probe] exp(-t_k / t2)."""
    if reg.density is None:
        raise ValueError("FID acquisition needs a density-matrix register")
    energies = np.real(np.diag(internal_hamiltonian(sys)))
    obs = embed(SIGMA_MINUS, PROBE)
    # Tr[rho(t) O] = sum_mn rho_mn O_nm exp(-i (E_m - E_n) t); H is diagonal
    weights = reg.density * obs.T
    m, n = np.nonzero(obs.T)
    gaps = energies[m] - energies[n]
    t = cfg.times()
    samples = weights[m, n] @ np.exp(-1j * np.outer(gaps, t))
    return FID(samples * np.exp(-t / cfg.t2), cfg.dwell)


def dft(fid: FID) -> Spectrum:
    n = len(fid.samples)
    if n < 2 or n & (n - 1):
        raise ValueError(f"FID length must be a power of two, got {n}")
    values = np.fft.fftshift(np.fft.fft(fid.samples))
    freqs = np.fft.fftshift(np.fft.fftfreq(n, fid.dwell))
    return Spectrum(values, freqs)


def _check_windows(windows: Sequence[Sequence[float]]) -> list[tuple[float, float]]:
    ws = sorted((float(lo), float(hi)) for lo, hi in windows)
    if not ws:
        raise ValueError("no integration windows given")
    for lo, hi in ws:
        if not lo < hi:
            raise ValueError(f"empty window [{lo}, {hi}]")
    for (_, hi), (lo, _) in zip(ws, ws[1:]):
        if lo < hi:
            raise ValueError("integration windows overlap")
    return ws


def window_integral(spec: Spectrum, windows, baseline_offset: float = 0.0) -> complex:
    """Summed window integrals, each less the mean of two flanking windows of equal width."""
    total = 0j
    for lo, hi in _check_windows(windows):
        value = spec.integrate(lo, hi)
        if baseline_offset > 0:
            below = spec.integrate(lo - baseline_offset, hi - baseline_offset)
            above = spec.integrate(lo + baseline_offset, hi + baseline_offset)
            value -= 0.5 * (below + above)
        total += value
    return total


def extract_phase(
    spec: Spectrum,
    windows,
    baseline_offset: float = 0.0,
    reference: Optional[float] = None,
) -> PhaseResult:
    """gamma = atan2(Int_Im, Int_Re) over the given frequency windows.

    ``visibility`` is ``|Int|``, divided by ``reference`` when one is given.
    """
    integral = window_integral(spec, windows, baseline_offset)
    vis = abs(integral) / reference if reference else abs(integral)
    if abs(integral.real) < 1e-12 and abs(integral.imag) < 1e-12:
        return PhaseResult(math.nan, vis, defined=False)
    phase = math.atan2(integral.imag, integral.real)
    if phase == -math.pi:
        phase = math.pi
    return PhaseResult(phase, vis, defined=vis > UNDEFINED_BELOW)


@dataclass(frozen=True)
class NMRExperiment:
    """Everything needed to turn one interferometer run into a spectral phase."""

    sys: SpinSystem = field(default_factory=SpinSystem)
    acq: AcquisitionConfig = field(default_factory=AcquisitionConfig)
    pseudo_pure: PseudoPureConfig = field(default_factory=PseudoPureConfig)

    def spectrum(self, reg: Register3) -> Spectrum:
        return dft(acquire_fid(reg, self.sys, self.acq).conjugate())

    def reference_integral(self, state: MixedQubit) -> float:
        """|Int| of the same preparation with no controlled evolution, at epsilon = 1."""
        gates = [prep_rotation(state), cnot(SYSTEM, ANCILLA), pseudo_hadamard(PROBE)]
        reg = run_sequence(Register3.pseudo_pure(PseudoPureConfig(1.0)), gates)
        windows = integration_windows(self.sys, self.acq)
        return abs(window_integral(self.spectrum(reg), windows, self.acq.baseline_offset))

    def measure(self, state: MixedQubit, scheme: AncillaScheme, omega_s_t: float = TWO_PI) -> PhaseResult:
        reg = final_register(state, scheme, omega_s_t, self.pseudo_pure)
        windows = integration_windows(self.sys, self.acq)
        ref = self.pseudo_pure.epsilon * self.reference_integral(state)
        return extract_phase(self.spectrum(reg), windows, self.acq.baseline_offset, reference=ref)


def write_series_csv(path, axis: np.ndarray, values: np.ndarray) -> None:
    """CSV with columns index,time_or_freq,re,im."""
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "time_or_freq", "re", "im"])
        for i, (x, v) in enumerate(zip(axis, values)):
            writer.writerow([i, f"{x:.12g}", f"{v.real:.12g}", f"{v.imag:.12g}"])


def fid_to_csv(fid: FID, path) -> None:
    write_series_csv(path, fid.times, fid.samples)


def spectrum_to_csv(spec: Spectrum, path) -> None:
    write_series_csv(path, spec.freq_axis, spec.values)
