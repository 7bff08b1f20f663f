"""Three-qubit interferometer: probe (qubit 0), system (1), ancilla (2).

Basis index is ``4*probe + 2*system + ancilla``. Rotations use the angle
convention ``Ry(beta) = exp(-i beta/2 sigma_y)``, so the beam-splitting
pseudo-Hadamard is ``Ry(pi/2)`` and the state-preparation rotation is
``Ry(2 arccos sqrt(p1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import IDENTITY2, SIGMA_X, SIGMA_Y, kron_all, partial_trace, su2_exp, unitarity_error
from .phases import TWO_PI, AncillaScheme, PhaseResult, phase_of
from .purification import MixedQubit

N_QUBITS = 3
DIM = 2**N_QUBITS
PROBE, SYSTEM, ANCILLA = 0, 1, 2

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def _check_target(q: int) -> int:
    if q not in (PROBE, SYSTEM, ANCILLA):
        raise ValueError(f"qubit index {q!r} out of range 0..{N_QUBITS - 1}")
    return q


def embed(u: np.ndarray, target: int) -> np.ndarray:
    """Lift a single-qubit gate onto the 3-qubit register."""
    _check_target(target)
    factors = [IDENTITY2] * N_QUBITS
    factors[target] = u
    return kron_all(*factors)


def ry(beta: float, target: int) -> np.ndarray:
    if not math.isfinite(beta):
        raise ValueError(f"rotation angle must be finite, got {beta!r}")
    return embed(su2_exp((0.0, 1.0, 0.0), beta), target)


def pseudo_hadamard(target: int = PROBE) -> np.ndarray:
    return ry(0.5 * math.pi, target)


def prep_rotation(state: MixedQubit, target: int = SYSTEM) -> np.ndarray:
    return ry(2.0 * math.acos(math.sqrt(state.p1)), target)


def cnot(control: int, target: int) -> np.ndarray:
    _check_target(control)
    _check_target(target)
    if control == target:
        raise ValueError("control and target must differ")
    off = [IDENTITY2] * N_QUBITS
    off[control] = _P0
    on = [IDENTITY2] * N_QUBITS
    on[control] = _P1
    on[target] = SIGMA_X
    return kron_all(*off) + kron_all(*on)


def controlled_bilocal(Us: np.ndarray, Ua: np.ndarray) -> np.ndarray:
    """Apply ``Us (x) Ua`` to system and ancilla iff the probe is |1>."""
    return kron_all(_P0, IDENTITY2, IDENTITY2) + kron_all(_P1, Us, Ua)


def sequence(state: MixedQubit, scheme: AncillaScheme, omega_s_t: float = TWO_PI) -> list[np.ndarray]:
    """Gates of the network in application order."""
    Us, Ua = scheme.propagators(omega_s_t / scheme.omega_s)
    return [
        prep_rotation(state),
        cnot(SYSTEM, ANCILLA),
        pseudo_hadamard(PROBE),
        controlled_bilocal(Us.matrix, Ua.matrix),
    ]


@dataclass(frozen=True)
class PseudoPureConfig:
    epsilon: float = 1e-5

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon!r}")


@dataclass(frozen=True)
class Register3:
    """Either a pure 8-dim state or an 8x8 density matrix."""

    state: Optional[np.ndarray] = None
    density: Optional[np.ndarray] = None

    def __post_init__(self):
        if (self.state is None) == (self.density is None):
            raise ValueError("give exactly one of state or density")
        if self.state is not None:
            if self.state.shape != (DIM,) or abs(np.linalg.norm(self.state) - 1) > 1e-12:
                raise ValueError("state must be a normalised 8-vector")
        else:
            rho = self.density
            if rho.shape != (DIM, DIM) or abs(np.trace(rho) - 1) > 1e-12:
                raise ValueError("density must be an 8x8 matrix of unit trace")
            if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
                raise ValueError("density is not Hermitian")

    @classmethod
    def ground(cls) -> "Register3":
        v = np.zeros(DIM, dtype=complex)
        v[0] = 1.0
        return cls(state=v)

    @classmethod
    def pseudo_pure(cls, cfg: PseudoPureConfig) -> "Register3":
        rho = (1.0 - cfg.epsilon) / DIM * np.eye(DIM, dtype=complex)
        rho[0, 0] += cfg.epsilon
        return cls(density=rho)

    @property
    def is_pure(self) -> bool:
        return self.state is not None

    def to_density(self) -> np.ndarray:
        if self.density is not None:
            return self.density
        return np.outer(self.state, self.state.conj())

    def apply(self, u: np.ndarray) -> "Register3":
        if self.state is not None:
            return Register3(state=u @ self.state)
        return Register3(density=u @ self.density @ u.conj().T)

    def probe_density(self) -> np.ndarray:
        return partial_trace(self.to_density(), [2, 2, 2], keep={PROBE})


def run_sequence(reg: Register3, gates: list[np.ndarray]) -> Register3:
    for g in gates:
        reg = reg.apply(g)
    return reg


def probe_readout(reg: Register3) -> complex:
    """<sigma_x> + i <sigma_y> of the probe, which equals <Psi_in|U|Psi_in>.

    The conjugate, <sigma_x> - i <sigma_y>, is what a sigma_minus detector
    reports; this function standardises on the amplitude sign.
    """
    rho_p = reg.probe_density()
    sx = np.trace(rho_p @ SIGMA_X).real
    sy = np.trace(rho_p @ SIGMA_Y).real
    return complex(sx, sy)


def final_register(
    state: MixedQubit,
    scheme: AncillaScheme,
    omega_s_t: float = TWO_PI,
    cfg: Optional[PseudoPureConfig] = None,
) -> Register3:
    start = Register3.ground() if cfg is None else Register3.pseudo_pure(cfg)
    return run_sequence(start, sequence(state, scheme, omega_s_t))


def run_interferometer(state: MixedQubit, scheme: AncillaScheme, omega_s_t: float = TWO_PI) -> PhaseResult:
    return phase_of(probe_readout(final_register(state, scheme, omega_s_t)))


def run_pseudo_pure(
    state: MixedQubit, scheme: AncillaScheme, cfg: PseudoPureConfig, omega_s_t: float = TWO_PI
) -> PhaseResult:
    """Same network started from the pseudo-pure state; visibility carries the factor epsilon."""
    return phase_of(probe_readout(final_register(state, scheme, omega_s_t, cfg)))


def max_gate_unitarity_error(gates) -> float:
    return max(unitarity_error(g) for g in gates)
