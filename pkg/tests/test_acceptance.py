"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line with the measured value, its tolerance
and the runtime. Run ``pytest tests/test_acceptance.py -v`` to see them.
"""
import math
import time

import numpy as np
import pytest

from mixphase.checks import (
    check_circuit,
    check_conditions,
    check_formula,
    check_nmr,
    check_pseudo_pure,
    check_transport,
    probe_line_positions,
)
from mixphase.cli import main
from mixphase.config import Config
from mixphase.phases import (
    SCHEMES,
    SJOQVIST,
    UHLMANN,
    make_scheme,
    scheme_amplitude,
    scheme_phase,
    sjoqvist_closed_form,
    uhlmann_closed_form,
)
from mixphase.purification import MixedQubit, pure_transport_residual, uhlmann_parallel_residual
from mixphase.sweep import parse_csv

from conftest import amplitude_oracle, rotation_oracle

CFG = Config()
GRID = [(float(r), float(th)) for r in np.linspace(0, 1, 13) for th in np.linspace(0, math.pi / 2, 13)]


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return emit


def uhlmann_oracle_ancilla(r, theta_s):
    """(theta_a, omega_a / omega_s) solving tan theta_a = k tan theta_s, omega_a cos theta_a = omega_s cos theta_s."""
    k = math.sqrt(max(0.0, 1 - r * r))  # 2 sqrt(p1 p2)
    return math.atan2(k * math.sin(theta_s), math.cos(theta_s)), math.hypot(math.cos(theta_s), k * math.sin(theta_s))


def offsets_stats(diffs):
    d = np.array([(x + math.pi / 2) % (2 * math.pi) - math.pi / 2 for x in diffs])
    mean = float(d.mean())
    return float(d.std()), mean, min(abs(mean), abs(mean - math.pi))


def test_criterion_1_uhlmann_formula(report):
    res = check_formula(UHLMANN, CFG)
    diffs = []
    for r, th in GRID:
        theta_a, ratio = uhlmann_oracle_ancilla(r, th)
        A = amplitude_oracle((1 + r) / 2, th, (-math.sin(theta_a), 0, -math.cos(theta_a)), ratio)
        if abs(A) <= 1e-9:
            continue
        # the ancilla turns antiparallel to +(sin, 0, cos): signed rate is negative
        cf = uhlmann_closed_form(MixedQubit.from_purity(r), th, theta_a, 1.0, -ratio, 2 * math.pi)
        diffs.append(math.atan2(A.imag, A.real) - cf)
    std, mean, off = offsets_stats(diffs)
    ok = res.passed and res.seconds < 1.0 and std <= 1e-9 and off <= 1e-9
    report("1 Uhlmann oracle/formula", ok,
           f"oracle std={std:.1e} mean={mean:+.3e} | package {res.value:.1e} in {res.seconds:.3f}s (tol 1e-9, <1s)")
    assert ok


def test_criterion_2_sjoqvist_formula(report):
    res = check_formula(SJOQVIST, CFG)
    diffs, raw_gap = [], 0.0
    for r, th in GRID:
        c = math.cos(th)
        A = amplitude_oracle((1 + r) / 2, th, (0, 0, -1), c)
        if abs(A) <= 1e-9:
            continue
        cf = sjoqvist_closed_form(r, th)
        diffs.append(math.atan2(A.imag, A.real) - cf)
        x = math.pi * (1 - c)
        if abs(math.cos(x)) > 1e-3:
            # the arctan form agrees with the pole-free form modulo pi away from its pole
            g = (cf + math.atan(r * math.tan(x))) % math.pi
            raw_gap = max(raw_gap, min(g, math.pi - g))
    std, mean, off = offsets_stats(diffs)
    ok = res.passed and res.seconds < 1.0 and std <= 1e-9 and off <= 1e-9 and raw_gap <= 1e-9
    report("2 Sjoqvist oracle/formula", ok,
           f"oracle std={std:.1e} mean={mean:+.3e} arctan gap={raw_gap:.1e} | package {res.value:.1e} in {res.seconds:.3f}s")
    assert ok


def test_criterion_3_condition_residuals(report):
    res = check_conditions(CFG)
    worst = 0.0
    for r, th in GRID:
        if th > math.pi / 2 - 1e-6:
            continue
        state = MixedQubit.from_purity(r)
        sch = make_scheme(UHLMANN, state, th, CFG.omega_s)
        k = 2 * math.sqrt(state.p1 * state.p2)
        worst = max(worst, abs(math.tan(sch.theta_a) - k * math.tan(th)),
                    abs(sch.omega_a * math.cos(sch.theta_a) - CFG.omega_s * math.cos(th)))
    ok = res.passed and worst <= 1e-12
    report("3 condition residuals", ok, f"max={worst:.1e} package={res.value:.1e} (tol 1e-12)")
    assert ok


def _oracle_evolution(scheme):
    def ev(t):
        system_axis = (math.sin(scheme.theta_s), 0, math.cos(scheme.theta_s))
        return rotation_oracle(system_axis, scheme.omega_s * t), rotation_oracle(scheme.field.axis, scheme.omega_a * t)
    return ev


def test_criterion_4_parallel_transport(report):
    res = check_transport(CFG)
    w = CFG.omega_s
    worst = 0.0
    times = np.linspace(0, 2 * math.pi / w, 18)[1:-1]
    for r, th in ((0.0, math.pi / 6), (1 / 3, math.pi / 4), (2 / 3, math.pi / 6), (5 / 6, math.pi / 3), (1.0, math.pi / 4)):
        state = MixedQubit.from_purity(r)
        sj = _oracle_evolution(make_scheme(SJOQVIST, state, th, w))
        uh = _oracle_evolution(make_scheme(UHLMANN, state, th, w))
        for t in times:
            worst = max(worst, pure_transport_residual(sj, state, t, 1e-6) / w,
                        uhlmann_parallel_residual(uh, state, t, 1e-6) / w)
    ok = res.passed and res.seconds < 1.0 and worst <= 1e-6
    report("4 parallel transport", ok,
           f"oracle-propagator residual/omega={worst:.1e} package={res.value:.1e} in {res.seconds:.3f}s (tol 1e-6, <1s)")
    assert ok


def test_criterion_5_circuit_equivalence(report):
    res = check_circuit(CFG)
    ok = res.passed and res.seconds < 1.0
    report("5 circuit equivalence", ok, f"max={res.value:.1e} in {res.seconds:.3f}s on 104 points (tol 1e-10, <1s)")
    assert ok


def test_criterion_6_pseudo_pure(report):
    res = check_pseudo_pure(CFG)
    report("6 pseudo-pure invariance", res.passed, f"max={res.value:.1e} (tol 1e-9)")
    assert res.passed


def test_criterion_7_nmr_pipeline(report):
    res = check_nmr(CFG)
    observed, _, width = probe_line_positions(CFG)
    expected = sorted(s * (54.1 + d * 1.3) / 2 for s in (1, -1) for d in (1, -1))
    line_err = max(abs(o - e) for o, e in zip(observed, expected))
    ok = res.passed and res.seconds < 30.0 and line_err <= width
    report("7 NMR pipeline", ok, f"phase err={res.value:.1e} (tol 5e-3) lines off by {line_err:.3f}Hz "
           f"(bin {width:.3f}Hz) in {res.seconds:.2f}s (<30s)")
    assert ok


def test_criterion_8_limiting_cases(report):
    imag = pure = 0.0
    exact = True
    for th in np.linspace(0, math.pi / 2, 13):
        for tag in SCHEMES:
            mixed = MixedQubit.from_purity(0.0)
            imag = max(imag, abs(_amp(mixed, tag, th).imag))
            pure_state = MixedQubit.from_purity(1.0)
            d = (scheme_phase(pure_state, make_scheme(tag, pure_state, th, CFG.omega_s)).phase
                 + math.pi * (1 - math.cos(th))) % math.pi
            pure = max(pure, min(d, math.pi - d))
    for r in np.linspace(0, 1, 13):
        state = MixedQubit.from_purity(r)
        for tag in SCHEMES:
            exact &= scheme_phase(state, make_scheme(tag, state, 0.0, CFG.omega_s)).phase in (0.0, math.pi)
    ok = imag <= 1e-12 and pure <= 1e-9 and exact
    report("8 limiting cases", ok, f"max|ImA| r=0: {imag:.1e}, r=1 dev: {pure:.1e}, theta=0 exact: {exact}")
    assert ok


def _amp(state, tag, th):
    return scheme_amplitude(state, make_scheme(tag, state, th, CFG.omega_s))


def test_criterion_9_figure_data(tmp_path, report):
    start = time.perf_counter()
    for name in ("fig2", "fig4"):
        assert main([name, "--out", str(tmp_path / f"{name}_a.csv"), "--no-timestamp"]) == 0
    seconds = time.perf_counter() - start
    for name in ("fig2", "fig4"):
        assert main([name, "--out", str(tmp_path / f"{name}_b.csv"), "--no-timestamp"]) == 0
    same = all((tmp_path / f"{n}_a.csv").read_bytes() == (tmp_path / f"{n}_b.csv").read_bytes() for n in ("fig2", "fig4"))
    counts = [len(parse_csv((tmp_path / f"{n}_a.csv").read_text())[1]) for n in ("fig2", "fig4")]
    ok = seconds < 10.0 and same and counts == [51 * 51 * 2, 4 * 13 * 2]
    report("9 figure data", ok, f"fig2+fig4 in {seconds:.2f}s (<10s), rows={counts}, byte-identical={same}")
    assert ok
