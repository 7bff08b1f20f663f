"""Effective magnetic fields and single-qubit propagators.

Sign convention (fixed here and nowhere else): the generator of a field with
precession rate ``omega`` about unit axis ``n`` is ``H = +(omega/2) n . sigma``
with ``hbar = 1``, so a propagator over time ``t`` is a rotation by
``omega * t`` about ``n``. A pure ``|0>`` taken once around a cone of polar
angle ``theta`` then picks up ``-pi (1 - cos theta)`` modulo 2 pi. Fields that
point "backwards" are encoded by flipping ``axis``; ``omega`` is never negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import pauli_vector, su2_exp, unit_axis, unitarity_error

THETA_MAX = math.pi / 2


@dataclass(frozen=True)
class FieldSpec:
    omega: float
    axis: tuple[float, float, float]

    def __post_init__(self):
        if not math.isfinite(self.omega) or self.omega < 0:
            raise ValueError(f"omega must be finite and >= 0, got {self.omega!r}")
        n = unit_axis(self.axis)
        object.__setattr__(self, "axis", tuple(float(x) for x in n))

    def hamiltonian(self) -> np.ndarray:
        return 0.5 * self.omega * pauli_vector(self.axis)


@dataclass(frozen=True)
class Propagator:
    matrix: np.ndarray
    duration: float

    def __post_init__(self):
        if unitarity_error(self.matrix) > 1e-10:
            raise ValueError("propagator matrix is not unitary")


def check_theta(theta_s: float) -> float:
    # tolerate rounding on the endpoints of linspace-style grids
    if not (-1e-15 <= theta_s <= THETA_MAX + 1e-15):
        raise ValueError(f"theta_s={theta_s!r} outside [0, pi/2]")
    return min(max(theta_s, 0.0), THETA_MAX)


def system_field(omega_s: float, theta_s: float) -> FieldSpec:
    """Field of strength ``omega_s`` in the xz-plane, ``theta_s`` off the z axis."""
    theta_s = check_theta(theta_s)
    if not omega_s > 0:
        raise ValueError(f"omega_s must be positive, got {omega_s!r}")
    return FieldSpec(omega_s, (math.sin(theta_s), 0.0, math.cos(theta_s)))


def propagator(field: FieldSpec, t: float) -> Propagator:
    if t < 0:
        raise ValueError(f"duration must be >= 0, got {t!r}")
    return Propagator(su2_exp(field.axis, field.omega * t), t)
