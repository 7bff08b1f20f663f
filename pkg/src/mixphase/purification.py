"""Diagonal qubit states, their canonical purification, and transport checks.

Vectorisation convention: ``vec(w)`` stacks the rows of ``w``, so the
purification sqrt(p1)|00> + sqrt(p2)|11> is ``vec(diag(sqrt(p1), sqrt(p2)))``
and ``(Us (x) Ua) vec(w) = vec(Us w Ua^T)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import kron
from .spin import Propagator

# t -> (Us(t), Ua(t)) as 2x2 arrays
Evolution = Callable[[float], "tuple[np.ndarray, np.ndarray]"]


@dataclass(frozen=True)
class MixedQubit:
    """rho = p1 |0><0| + p2 |1><1| with p1 >= p2."""

    p1: float
    p2: float

    def __post_init__(self):
        if abs(self.p1 + self.p2 - 1.0) > 1e-12:
            raise ValueError(f"p1 + p2 = {self.p1 + self.p2!r}, expected 1")
        if not (self.p1 >= self.p2 >= 0.0):
            raise ValueError(f"need p1 >= p2 >= 0, got p1={self.p1!r}, p2={self.p2!r}")

    @classmethod
    def from_purity(cls, r: float) -> "MixedQubit":
        if not (0.0 <= r <= 1.0):
            raise ValueError(f"purity r={r!r} outside [0, 1]")
        p1 = 0.5 * (1.0 + r)
        return cls(p1, 1.0 - p1)

    @property
    def r(self) -> float:
        return self.p1 - self.p2

    def density(self) -> np.ndarray:
        return np.diag([self.p1, self.p2]).astype(complex)

    def sqrt_density(self) -> np.ndarray:
        return np.diag([math.sqrt(self.p1), math.sqrt(self.p2)]).astype(complex)


@dataclass(frozen=True)
class PurifiedState:
    vector: np.ndarray

    def __post_init__(self):
        if self.vector.shape != (4,):
            raise ValueError("purification lives in a 4-dim space")
        if abs(np.linalg.norm(self.vector) - 1.0) > 1e-12:
            raise ValueError("purification is not normalised")


@dataclass(frozen=True)
class AmplitudeOperator:
    w: np.ndarray
    t: float

    def vec(self) -> np.ndarray:
        return self.w.reshape(-1)


def purify(state: MixedQubit) -> PurifiedState:
    v = np.zeros(4, dtype=complex)
    v[0] = math.sqrt(state.p1)
    v[3] = math.sqrt(state.p2)
    return PurifiedState(v)


def amplitude_operator(Us: Propagator, Ua: Propagator, state: MixedQubit) -> AmplitudeOperator:
    if Us.duration != Ua.duration:
        raise ValueError(f"propagator durations differ: {Us.duration!r} vs {Ua.duration!r}")
    w = Us.matrix @ state.sqrt_density() @ Ua.matrix.T
    return AmplitudeOperator(w, Us.duration)


def evolved_purification(evolution: Evolution, state: MixedQubit, t: float) -> np.ndarray:
    Us, Ua = evolution(t)
    return kron(Us, Ua) @ purify(state).vector


def _check_delta(delta: float) -> None:
    if not delta > 0:
        raise ValueError(f"finite-difference step must be positive, got {delta!r}")


def pure_transport_residual(evolution: Evolution, state: MixedQubit, t: float, delta: float) -> float:
    """Central-difference estimate of |<Psi(t)|dPsi/dt>| for the purification."""
    _check_delta(delta)
    psi = evolved_purification(evolution, state, t)
    fwd = evolved_purification(evolution, state, t + delta)
    bwd = evolved_purification(evolution, state, t - delta)
    return float(abs(np.vdot(psi, (fwd - bwd) / (2.0 * delta))))


def uhlmann_parallel_residual(evolution: Evolution, state: MixedQubit, t: float, delta: float) -> float:
    """max |M - M^dagger| with M = w^dagger dw/dt; zero when w moves Uhlmann-parallel."""
    _check_delta(delta)
    sq = state.sqrt_density()

    def w_at(s):
        Us, Ua = evolution(s)
        return Us @ sq @ Ua.T

    w = w_at(t)
    w_dot = (w_at(t + delta) - w_at(t - delta)) / (2.0 * delta)
    m = w.conj().T @ w_dot
    return float(np.max(np.abs(m - m.conj().T)))
