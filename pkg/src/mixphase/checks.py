"""Invariant checks run by ``mixphase check`` and by the acceptance tests.

Each check returns a ``CheckResult`` carrying the measured worst-case value
next to its tolerance, so a report shows margins and not just pass/fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .circuit import PseudoPureConfig, Register3, run_interferometer, run_pseudo_pure
from .config import Config
from .nmr import acquire_fid, dft, multiplet_lines
from .phases import (
    SCHEMES,
    SJOQVIST,
    TWO_PI,
    UHLMANN,
    AncillaScheme,
    condition_residuals,
    make_scheme,
    offset_mod_2pi,
    principal,
    pure_cyclic_phase,
    scheme_amplitude,
    scheme_phase,
    sjoqvist_closed_form,
    uhlmann_closed_form,
)
from .purification import MixedQubit, pure_transport_residual, uhlmann_parallel_residual
from .spin import FieldSpec
from .sweep import fig4_specs


@dataclass(frozen=True)
class Faults:
    """Deliberate defects, used to show the checks can fail."""

    theta_a_shift: float = 0.0
    # +1 feeds the Uhlmann formula the unsigned ancilla rate (the rejected reading)
    uhlmann_rate_sign: float = -1.0
    uhlmann_coefficient: float = 1.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    seconds: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28s} value={self.value:.3e}  tol={self.tolerance:.1e}  ({self.seconds:.2f}s) {self.detail}"


def unit_grid(n: int) -> list[tuple[float, float]]:
    """n x n (r, theta_s) grid over [0, 1] x [0, pi/2], endpoints included."""
    return [(float(r), float(th)) for r in np.linspace(0, 1, n) for th in np.linspace(0, math.pi / 2, n)]


def fig4_points(cfg: Config) -> list[tuple[float, float]]:
    return [pt for spec in fig4_specs(cfg) for pt in spec.grid()]


def _scheme(tag: str, state: MixedQubit, theta_s: float, cfg: Config, faults: Faults) -> AncillaScheme:
    scheme = make_scheme(tag, state, theta_s, cfg.omega_s)
    if tag == UHLMANN and faults.theta_a_shift:
        theta_a = scheme.theta_a + faults.theta_a_shift
        field = FieldSpec(scheme.omega_a, (-math.sin(theta_a), 0.0, -math.cos(theta_a)))
        scheme = replace(scheme, theta_a=theta_a, field=field)
    return scheme


def _timed(fn: Callable[[], tuple[float, float, str]], name: str, tol: float) -> CheckResult:
    start = time.perf_counter()
    value, bound, detail = fn()
    return CheckResult(name, bool(value <= bound), value, tol, time.perf_counter() - start, detail)


def formula_offsets(tag: str, cfg: Config = Config(), faults: Faults = Faults()) -> np.ndarray:
    """(arg A - closed form) mod 2 pi over the grid, skipping points with no defined phase."""
    out = []
    for r, th in unit_grid(cfg.grid_points):
        state = MixedQubit.from_purity(r)
        scheme = _scheme(tag, state, th, cfg, faults)
        res = scheme_phase(state, scheme)
        if not res.defined:
            continue
        if tag == SJOQVIST:
            cf = sjoqvist_closed_form(r, th)
        else:
            t = TWO_PI / cfg.omega_s
            rate = faults.uhlmann_rate_sign * scheme.omega_a
            cf = uhlmann_closed_form(state, th, scheme.theta_a, cfg.omega_s, rate, t, faults.uhlmann_coefficient)
        out.append(offset_mod_2pi(res.phase, cf))
    return np.array(out)


def check_formula(tag: str, cfg: Config = Config(), faults: Faults = Faults()) -> CheckResult:
    def run():
        d = formula_offsets(tag, cfg, faults)
        mean = float(d.mean())
        # distance of the mean from the nearest of {0, pi}
        off = min(abs(mean), abs(mean - math.pi))
        return max(float(d.std()), off), cfg.tol_formula, f"offset={mean:.12f} n={len(d)}"

    return _timed(run, f"formula_{tag}", cfg.tol_formula)


def check_conditions(cfg: Config = Config(), faults: Faults = Faults()) -> CheckResult:
    def run():
        worst = 0.0
        for r, th in unit_grid(cfg.grid_points):
            if th > math.pi / 2 - 1e-6:
                continue
            state = MixedQubit.from_purity(r)
            worst = max(worst, *condition_residuals(state, _scheme(UHLMANN, state, th, cfg, faults)))
        return worst, cfg.tol_condition, ""

    return _timed(run, "condition_residuals", cfg.tol_condition)


TRANSPORT_POINTS = ((0.0, math.pi / 6), (1 / 3, math.pi / 4), (2 / 3, math.pi / 6), (5 / 6, math.pi / 3), (1.0, math.pi / 4))


def check_transport(cfg: Config = Config(), faults: Faults = Faults()) -> CheckResult:
    def run():
        w = cfg.omega_s
        delta = 1e-6 / w
        times = np.linspace(0, TWO_PI / w, 18)[1:-1]
        worst = 0.0
        for r, th in TRANSPORT_POINTS:
            state = MixedQubit.from_purity(r)
            sj = _scheme(SJOQVIST, state, th, cfg, faults).evolution()
            uh = _scheme(UHLMANN, state, th, cfg, faults).evolution()
            for t in times:
                worst = max(
                    worst,
                    pure_transport_residual(sj, state, t, delta) / w,
                    uhlmann_parallel_residual(uh, state, t, delta) / w,
                )
        return worst, cfg.tol_transport, "residual / omega_s"

    return _timed(run, "parallel_transport", cfg.tol_transport)


def check_circuit(cfg: Config = Config(), faults: Faults = Faults()) -> CheckResult:
    def run():
        worst = 0.0
        for r, th in fig4_points(cfg):
            state = MixedQubit.from_purity(r)
            for tag in SCHEMES:
                scheme = _scheme(tag, state, th, cfg, faults)
                a, b = run_interferometer(state, scheme), scheme_phase(state, scheme)
                worst = max(worst, abs(principal(a.phase - b.phase)), abs(a.visibility - b.visibility))
        return worst, cfg.tol_circuit, ""

    return _timed(run, "circuit_equivalence", cfg.tol_circuit)


EPSILONS = (1e-5, 1e-2, 1.0)


def check_pseudo_pure(cfg: Config = Config(), faults: Faults = Faults()) -> CheckResult:
    def run():
        worst = 0.0
        for r, th in fig4_points(cfg):
            state = MixedQubit.from_purity(r)
            for tag in SCHEMES:
                scheme = _scheme(tag, state, th, cfg, faults)
                res = [run_pseudo_pure(state, scheme, PseudoPureConfig(e)) for e in EPSILONS]
                phases = [x.phase for x in res]
                worst = max(worst, *(abs(principal(a - b)) for a in phases for b in phases))
                base = res[-1].visibility
                for e, x in zip(EPSILONS, res):
                    worst = max(worst, abs(x.visibility / (e * base) - 1.0))
        return worst, cfg.tol_epsilon, ""

    return _timed(run, "pseudo_pure_invariance", cfg.tol_epsilon)


def probe_line_positions(cfg: Config = Config()) -> tuple[list[float], list[float], float]:
    """Observed vs predicted probe multiplet positions (Hz) and the bin width.

    Spins 2 and 3 are left maximally mixed so all four lines carry weight.
    """
    exp = cfg.nmr()
    rho = np.eye(8, dtype=complex) / 8
    rho += 0.5 * np.kron(np.array([[0, 1], [1, 0]]), np.eye(4)) / 8
    spec = dft(acquire_fid(Register3(density=rho), exp.sys, exp.acq).conjugate())
    predicted = sorted(multiplet_lines(exp.sys).values())
    mag = np.abs(spec.values)
    f = spec.freq_axis
    observed = []
    for line in predicted:
        near = np.abs(f - line) < 0.6
        observed.append(float(f[near][np.argmax(mag[near])]))
    return observed, predicted, spec.bin_width


def check_nmr(cfg: Config = Config(), faults: Faults = Faults()) -> CheckResult:
    def run():
        exp = cfg.nmr()
        worst = 0.0
        for r, th in fig4_points(cfg):
            state = MixedQubit.from_purity(r)
            for tag in SCHEMES:
                scheme = _scheme(tag, state, th, cfg, faults)
                dm = run_pseudo_pure(state, scheme, exp.pseudo_pure)
                worst = max(worst, abs(principal(exp.measure(state, scheme).phase - dm.phase)))
        observed, predicted, width = probe_line_positions(cfg)
        line_err = max(abs(o - p) for o, p in zip(observed, predicted))
        # a line more than one bin off counts as a failure regardless of the phase margin
        value = worst if line_err <= width else math.inf
        return value, cfg.tol_nmr, f"line_offset={line_err:.3f}Hz bin={width:.3f}Hz"

    return _timed(run, "nmr_pipeline", cfg.tol_nmr)


def check_limits(cfg: Config = Config(), faults: Faults = Faults()) -> CheckResult:
    """r = 0 gives a real amplitude, r = 1 gives the pure cyclic phase, theta_s = 0 gives 0 or pi."""

    def run():
        imag = pure = exact = 0.0
        for th in np.linspace(0, math.pi / 2, cfg.grid_points):
            for tag in SCHEMES:
                mixed = MixedQubit.from_purity(0.0)
                imag = max(imag, abs(scheme_amplitude(mixed, _scheme(tag, mixed, th, cfg, faults)).imag))
                state = MixedQubit.from_purity(1.0)
                d = (scheme_phase(state, _scheme(tag, state, th, cfg, faults)).phase - pure_cyclic_phase(th)) % math.pi
                pure = max(pure, min(d, math.pi - d))
        for r in np.linspace(0, 1, cfg.grid_points):
            state = MixedQubit.from_purity(r)
            for tag in SCHEMES:
                p = scheme_phase(state, _scheme(tag, state, 0.0, cfg, faults)).phase
                if p not in (0.0, math.pi):
                    exact = math.inf
        value = max(imag / 1e-12, pure / 1e-9, exact)
        return value, 1.0, f"max|ImA|={imag:.1e} pure_dev={pure:.1e} theta0_exact={exact == 0.0}"

    return _timed(run, "limiting_cases", 1.0)


ALL_CHECKS = (
    lambda cfg, f: check_formula(UHLMANN, cfg, f),
    lambda cfg, f: check_formula(SJOQVIST, cfg, f),
    check_conditions,
    check_transport,
    check_circuit,
    check_pseudo_pure,
    check_nmr,
    check_limits,
)


def check_suite(cfg: Config = Config(), faults: Faults = Faults()) -> list[CheckResult]:
    return [check(cfg, faults) for check in ALL_CHECKS]
