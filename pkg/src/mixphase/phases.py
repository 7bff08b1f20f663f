"""Ancilla constructions for the Sjoqvist and Uhlmann phases, and their closed forms.

Both phases are ``arg <Psi| Us (x) Ua |Psi>`` for the canonical purification;
they differ only in how the ancilla field is chosen.

* Sjoqvist: the ancilla sees ``-z`` with rate ``omega_s cos(theta_s)``, which
  cancels the dynamical phase of both eigenbranches.
* Uhlmann: the ancilla sees ``-(sin theta_a, 0, cos theta_a)`` with
  ``tan theta_a = 2 sqrt(p1 p2) tan theta_s`` and
  ``omega_a cos theta_a = omega_s cos theta_s``, which keeps ``w^dagger dw/dt``
  Hermitian.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
import numpy as np

from .linalg import kron
from .purification import MixedQubit, purify
from .spin import THETA_MAX, FieldSpec, Propagator, check_theta, propagator, system_field

SJOQVIST = "sjoqvist"
UHLMANN = "uhlmann"
SCHEMES = (SJOQVIST, UHLMANN)

UNDEFINED_BELOW = 1e-9
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AncillaScheme:
    tag: str
    field: FieldSpec
    theta_a: float
    theta_s: float
    omega_s: float

    @property
    def omega_a(self) -> float:
        return self.field.omega

    def rotation(self, t: float) -> float:
        """Total ancilla rotation angle after time ``t``."""
        return self.field.omega * t

    def evolution(self):
        """``t -> (Us(t), Ua(t))`` for the bilocal evolution of this scheme."""
        sys_field = system_field(self.omega_s, self.theta_s)

        def at(t):
            return propagator(sys_field, t).matrix, propagator(self.field, t).matrix

        return at

    def propagators(self, t: float) -> tuple[Propagator, Propagator]:
        return propagator(system_field(self.omega_s, self.theta_s), t), propagator(self.field, t)


@dataclass(frozen=True)
class PhaseResult:
    """Principal-value phase in (-pi, pi] and visibility |A|.

    When the visibility is at or below 1e-9 the phase carries no information;
    ``defined`` is then False and ``phase`` is NaN.
    """

    phase: float
    visibility: float
    defined: bool = True


def sjoqvist_ancilla(theta_s: float, omega_s: float) -> AncillaScheme:
    theta_s = check_theta(theta_s)
    if not omega_s > 0:
        raise ValueError(f"omega_s must be positive, got {omega_s!r}")
    field = FieldSpec(omega_s * math.cos(theta_s), (0.0, 0.0, -1.0))
    return AncillaScheme(SJOQVIST, field, 0.0, theta_s, omega_s)


def uhlmann_ancilla(state: MixedQubit, theta_s: float, omega_s: float) -> AncillaScheme:
    theta_s = check_theta(theta_s)
    if not omega_s > 0:
        raise ValueError(f"omega_s must be positive, got {omega_s!r}")
    k = 2.0 * math.sqrt(state.p1 * state.p2)
    if theta_s == THETA_MAX:
        # condition (b) degenerates to 0 = 0; take the limit theta_s -> pi/2
        theta_a = THETA_MAX if k > 0 else 0.0
        omega_a = k * omega_s
    else:
        c, s = math.cos(theta_s), math.sin(theta_s)
        theta_a = math.atan(k * math.tan(theta_s))
        # equals omega_s cos(theta_s) / cos(theta_a), without the 0/0 near pi/2
        omega_a = omega_s * math.hypot(c, k * s)
    axis = (-math.sin(theta_a), 0.0, -math.cos(theta_a))
    return AncillaScheme(UHLMANN, FieldSpec(omega_a, axis), theta_a, theta_s, omega_s)


def make_scheme(tag: str, state: MixedQubit, theta_s: float, omega_s: float) -> AncillaScheme:
    if tag == SJOQVIST:
        return sjoqvist_ancilla(theta_s, omega_s)
    if tag == UHLMANN:
        return uhlmann_ancilla(state, theta_s, omega_s)
    raise ValueError(f"unknown scheme {tag!r}; expected one of {SCHEMES}")


def condition_residuals(state: MixedQubit, scheme: AncillaScheme) -> tuple[float, float]:
    """|tan theta_a - 2 sqrt(p1 p2) tan theta_s| and |omega_a cos theta_a - omega_s cos theta_s|."""
    k = 2.0 * math.sqrt(state.p1 * state.p2)
    res_a = abs(math.tan(scheme.theta_a) - k * math.tan(scheme.theta_s))
    res_b = abs(scheme.omega_a * math.cos(scheme.theta_a) - scheme.omega_s * math.cos(scheme.theta_s))
    return res_a, res_b


def interference_amplitude(state: MixedQubit, Us: Propagator, Ua: Propagator) -> complex:
    """A = <Psi| Us (x) Ua |Psi> in the 4-dim system (x) ancilla space."""
    if Us.duration != Ua.duration:
        raise ValueError(f"propagator durations differ: {Us.duration!r} vs {Ua.duration!r}")
    psi = purify(state).vector
    return complex(np.vdot(psi, kron(Us.matrix, Ua.matrix) @ psi))


def principal(angle: float) -> float:
    """Wrap into (-pi, pi]."""
    wrapped = math.remainder(angle, TWO_PI)
    return math.pi if wrapped == -math.pi else wrapped


def phase_of(A: complex) -> PhaseResult:
    vis = abs(A)
    if vis <= UNDEFINED_BELOW:
        return PhaseResult(math.nan, vis, defined=False)
    phase = math.atan2(A.imag, A.real)
    if phase == -math.pi:
        phase = math.pi
    return PhaseResult(phase, vis)


def scheme_amplitude(state: MixedQubit, scheme: AncillaScheme, omega_s_t: float = TWO_PI) -> complex:
    Us, Ua = scheme.propagators(omega_s_t / scheme.omega_s)
    return interference_amplitude(state, Us, Ua)


def scheme_phase(state: MixedQubit, scheme: AncillaScheme, omega_s_t: float = TWO_PI) -> PhaseResult:
    return phase_of(scheme_amplitude(state, scheme, omega_s_t))


def uhlmann_closed_form(
    state: MixedQubit,
    theta_s: float,
    theta_a: float,
    omega_s: float,
    omega_a: float,
    t: float,
    coefficient: float = 1.0,
) -> float:
    """The published Uhlmann phase formula, in pole-free atan2 form.

    ``omega_a`` is the signed precession rate of the ancilla about
    ``+(sin theta_a, 0, cos theta_a)``. The Uhlmann ancilla field points the
    other way, so for that construction pass ``-scheme.omega_a`` (see
    ``uhlmann_scheme_closed_form``). ``coefficient`` multiplies the
    ``sqrt(p1 p2) sin theta_s sin theta_a`` term of the denominator; it drops
    out whenever ``omega_s t`` is a multiple of 2 pi.
    """
    r = state.p1 - state.p2
    hs, ha = 0.5 * omega_s * t, 0.5 * omega_a * t
    ss, cs = math.sin(hs), math.cos(hs)
    sa, ca = math.sin(ha), math.cos(ha)
    cth_s, cth_a = math.cos(theta_s), math.cos(theta_a)
    mix = cth_s * cth_a - coefficient * math.sqrt(state.p1 * state.p2) * math.sin(theta_s) * math.sin(theta_a)
    num = r * (cth_s * ss * ca + cth_a * sa * cs)
    den = cs * ca + mix * ss * sa
    return -math.atan2(num, den)


def uhlmann_scheme_closed_form(
    state: MixedQubit, scheme: AncillaScheme, omega_s_t: float = TWO_PI, coefficient: float = 1.0
) -> float:
    t = omega_s_t / scheme.omega_s
    return uhlmann_closed_form(
        state, scheme.theta_s, scheme.theta_a, scheme.omega_s, -scheme.omega_a, t, coefficient
    )


def sjoqvist_closed_form(r: float, theta_s: float, omega_s_t: float = TWO_PI) -> float:
    """Sjoqvist phase of the dynamical-phase-cancelling construction.

    For a full system cycle this is -arctan(r tan(Omega/2)) with solid angle
    Omega = 2 pi (1 - cos theta_s), written as an atan2 so it has no poles.
    """
    if omega_s_t == TWO_PI:
        half_solid = math.pi * (1.0 - math.cos(theta_s))
        return -math.atan2(r * math.sin(half_solid), math.cos(half_solid))
    # general time: p1 <0|Us|0><0|Ua|0> + p2 <1|Us|1><1|Ua|1> = u + i r v
    h = 0.5 * omega_s_t
    c = math.cos(theta_s)
    branch = complex(math.cos(h), -c * math.sin(h)) * cmath.exp(1j * c * h)
    return math.atan2(r * branch.imag, branch.real)


def closed_form(tag: str, state: MixedQubit, scheme: AncillaScheme, omega_s_t: float = TWO_PI) -> float:
    if tag == SJOQVIST:
        return sjoqvist_closed_form(state.r, scheme.theta_s, omega_s_t)
    return uhlmann_scheme_closed_form(state, scheme, omega_s_t)


def offset_mod_2pi(phase: float, reference: float) -> float:
    """(phase - reference) mod 2 pi, reported in [-pi/2, 3pi/2) so 0 and pi are both interior."""
    return (phase - reference + 0.5 * math.pi) % TWO_PI - 0.5 * math.pi


def pure_cyclic_phase(theta_s: float) -> float:
    """Phase of a pure |0> after one precession cycle about the system field."""
    return -math.pi * (1.0 - math.cos(theta_s))

