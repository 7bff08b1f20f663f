"""Run configuration: defaults plus an optional flat ``key = value`` override file."""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, fields, replace

from .circuit import PseudoPureConfig
from .nmr import AcquisitionConfig, NMRExperiment, SpinSystem


@dataclass(frozen=True)
class Config:
    omega_s: float = 2.0 * math.pi
    epsilon: float = 1e-5
    # acquisition
    dwell: float = 2e-3
    npoints: int = 4096
    t2: float = 0.5
    window_linewidths: float = 2.0
    baseline_offset: float = 5.0
    # couplings, Hz
    j12: float = -1.3
    j13: float = 54.1
    j23: float = 34.9
    # grids
    grid_points: int = 13
    fig2_points: int = 51
    fig4_points: int = 13
    workers: int = 1
    # tolerances
    tol_formula: float = 1e-9
    tol_condition: float = 1e-12
    tol_transport: float = 1e-6
    tol_circuit: float = 1e-10
    tol_epsilon: float = 1e-9
    tol_nmr: float = 5e-3

    def nmr(self) -> NMRExperiment:
        return NMRExperiment(
            SpinSystem(j12=self.j12, j13=self.j13, j23=self.j23),
            AcquisitionConfig(self.dwell, self.npoints, self.t2, self.window_linewidths, self.baseline_offset),
            PseudoPureConfig(self.epsilon),
        )


def parse_config(text: str, base: Config = Config()) -> Config:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    parser.read_string("[config]\n" + text)
    types = {f.name: f.type for f in fields(Config)}
    updates = {}
    for key, raw in parser["config"].items():
        if key not in types:
            raise ValueError(f"unknown config key {key!r}")
        cast = int if types[key] in ("int", int) else float
        try:
            updates[key] = cast(raw)
        except ValueError:
            raise ValueError(f"bad value for {key!r}: {raw!r}") from None
    return replace(base, **updates)


def load_config(path) -> Config:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
