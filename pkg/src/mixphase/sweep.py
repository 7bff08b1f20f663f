"""Parameter sweeps over purity and field angle, and their CSV form."""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, TextIO

import numpy as np

from . import __version__
from .circuit import run_interferometer
from .config import Config
from .phases import SCHEMES, TWO_PI, closed_form, make_scheme, offset_mod_2pi, principal, scheme_phase
from .purification import MixedQubit

BACKENDS = ("amplitude", "circuit", "nmr")
AXES = ("r", "theta_s")
HEADER = "scheme,r,theta_s,phase_rad,phase_unwrapped_rad,visibility,closed_form_rad,abs_diff_mod_2pi"
OFFSET_VISIBILITY = 1e-6


@dataclass(frozen=True)
class SweepSpec:
    scheme: str = "both"
    axis: str = "r"
    fixed_value: float = math.pi / 4
    points: int = 13
    omega_s_t: float = TWO_PI
    backend: str = "amplitude"

    def __post_init__(self):
        if self.scheme not in (*SCHEMES, "both"):
            raise ValueError(f"scheme must be sjoqvist, uhlmann or both, got {self.scheme!r}")
        if self.axis not in AXES:
            raise ValueError(f"axis must be r or theta_s, got {self.axis!r}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points!r}")
        hi = math.pi / 2 if self.axis == "r" else 1.0
        if not (0.0 <= self.fixed_value <= hi):
            name = "theta_s" if self.axis == "r" else "r"
            raise ValueError(f"fixed {name}={self.fixed_value!r} outside [0, {hi:g}]")
        if not (math.isfinite(self.omega_s_t) and self.omega_s_t >= 0):
            raise ValueError(f"omega_s_t must be finite and >= 0, got {self.omega_s_t!r}")

    def schemes(self) -> tuple[str, ...]:
        return SCHEMES if self.scheme == "both" else (self.scheme,)

    def grid(self) -> list[tuple[float, float]]:
        """(r, theta_s) pairs, equidistant and inclusive of both endpoints."""
        if self.axis == "r":
            return [(float(r), self.fixed_value) for r in np.linspace(0.0, 1.0, self.points)]
        return [(self.fixed_value, float(th)) for th in np.linspace(0.0, math.pi / 2, self.points)]


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    r: float
    theta_s: float
    phase_rad: float
    phase_unwrapped_rad: float
    visibility: float
    closed_form_rad: float
    abs_diff_mod_2pi: float


def evaluate_point(args) -> tuple[float, float, float]:
    """(phase, visibility, closed form) for one grid point; NaN phase when undefined."""
    tag, r, theta_s, omega_s_t, backend, cfg = args
    state = MixedQubit.from_purity(r)
    scheme = make_scheme(tag, state, theta_s, cfg.omega_s)
    if backend == "amplitude":
        res = scheme_phase(state, scheme, omega_s_t)
    elif backend == "circuit":
        res = run_interferometer(state, scheme, omega_s_t)
    else:
        res = cfg.nmr().measure(state, scheme, omega_s_t)
    phase = res.phase if res.defined else math.nan
    return phase, res.visibility, closed_form(tag, state, scheme, omega_s_t)


def unwrap(phases: Iterable[float]) -> list[float]:
    """Continuous phase along the sweep: jumps larger than pi are folded by 2 pi."""
    out, shift, prev = [], 0.0, None
    for p in phases:
        if math.isnan(p):
            out.append(math.nan)
            continue
        if prev is not None:
            jump = p - prev
            if jump > math.pi:
                shift -= TWO_PI * round(jump / TWO_PI)
            elif jump < -math.pi:
                shift += TWO_PI * round(-jump / TWO_PI)
        prev = p
        out.append(p + shift)
    return out


def run_sweep(spec: SweepSpec, cfg: Config = Config(), pool: Optional[ProcessPoolExecutor] = None) -> list[SweepRow]:
    grid = spec.grid()
    rows = []
    for tag in spec.schemes():
        jobs = [(tag, r, th, spec.omega_s_t, spec.backend, cfg) for r, th in grid]
        # map() yields in submission order, whatever order workers finish in
        results = list(pool.map(evaluate_point, jobs, chunksize=8) if pool else map(evaluate_point, jobs))
        unwrapped = unwrap(p for p, _, _ in results)
        for (r, th), (phase, vis, cf), unw in zip(grid, results, unwrapped):
            diff = abs(principal(phase - cf)) if not math.isnan(phase) else math.nan
            rows.append(SweepRow(tag, r, th, phase, unw, vis, cf, diff))
    return rows


def fig4_specs(cfg: Config = Config(), backend: str = "amplitude", omega_s_t: float = TWO_PI) -> list[SweepSpec]:
    n = cfg.fig4_points
    specs = [SweepSpec("both", "r", th, n, omega_s_t, backend) for th in (math.pi / 6, math.pi / 4)]
    specs += [SweepSpec("both", "theta_s", r, n, omega_s_t, backend) for r in (1 / 3, 2 / 3)]
    return specs


def fig2_specs(cfg: Config = Config(), backend: str = "amplitude", omega_s_t: float = TWO_PI) -> list[SweepSpec]:
    n = cfg.fig2_points
    return [SweepSpec("both", "theta_s", float(r), n, omega_s_t, backend) for r in np.linspace(0.0, 1.0, n)]


def run_many(specs: list[SweepSpec], cfg: Config = Config()) -> list[SweepRow]:
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            return [row for spec in specs for row in run_sweep(spec, cfg, pool)]
    return [row for spec in specs for row in run_sweep(spec, cfg)]


def spinor_offsets(rows: Iterable[SweepRow]) -> dict[str, float]:
    """Mean of (phase - closed form) mod 2 pi per scheme, over rows with usable visibility."""
    diffs: dict[str, list[float]] = {}
    for row in rows:
        if row.visibility > OFFSET_VISIBILITY and not math.isnan(row.phase_rad):
            diffs.setdefault(row.scheme, []).append(offset_mod_2pi(row.phase_rad, row.closed_form_rad))
    return {tag: float(np.mean(v)) for tag, v in sorted(diffs.items())}


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return "nan" if math.isnan(x) else f"{x:.12g}"


def emit_csv(rows: list[SweepRow], out: TextIO, metadata: Optional[dict] = None) -> None:
    """Write '#'-prefixed metadata lines, the fixed header, then one line per row."""
    for key, value in (metadata or {}).items():
        out.write(f"# {key}: {value}\n")
    out.write(HEADER + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in asdict(row).values()) + "\n")


def csv_text(rows: list[SweepRow], metadata: Optional[dict] = None) -> str:
    buf = io.StringIO()
    emit_csv(rows, buf, metadata)
    return buf.getvalue()


def parse_csv(text: str) -> tuple[dict, list[SweepRow]]:
    metadata, rows = {}, []
    lines = text.split("\n")
    it = iter(line for line in lines if line)
    for line in it:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            metadata[key] = value
            continue
        if line != HEADER:
            raise ValueError(f"unexpected CSV header {line!r}")
        break
    for line in it:
        scheme, *nums = line.split(",")
        rows.append(SweepRow(scheme, *(float(x) for x in nums)))
    return metadata, rows


def sweep_metadata(specs: list[SweepSpec], rows: list[SweepRow], timestamp: Optional[str] = None) -> dict:
    meta = {"tool": f"mixphase {__version__}"}
    for i, spec in enumerate(specs):
        meta[f"spec[{i}]"] = ", ".join(f"{k}={_fmt(v)}" for k, v in asdict(spec).items())
    for tag, offset in spinor_offsets(rows).items():
        meta[f"spinor_offset_{tag}"] = _fmt(offset)
    if timestamp is not None:
        meta["generated"] = timestamp
    return meta
