#!/usr/bin/env python3
"""Simulate one NMR run and print how the spectral phase converges with the number of FID points."""
import argparse
import math
from dataclasses import replace

from mixphase import Config, MixedQubit, make_scheme, run_pseudo_pure
from mixphase.phases import principal


def run():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=float, default=1 / 3)
    ap.add_argument("--theta-s", type=float, default=math.pi / 6)
    ap.add_argument("--scheme", default="sjoqvist", choices=("sjoqvist", "uhlmann"))
    args = ap.parse_args()
    state = MixedQubit.from_purity(args.r)
    base = Config()
    scheme = make_scheme(args.scheme, state, args.theta_s, base.omega_s)
    target = run_pseudo_pure(state, scheme, base.nmr().pseudo_pure).phase
    print(f"density-matrix phase {target:+.6f} rad")
    print("npoints  spectral_phase  error")
    for n in (1024, 2048, 4096, 8192, 16384):
        got = replace(base, npoints=n).nmr().measure(state, scheme).phase
        print(f"{n:7d}  {got:+.6f}       {abs(principal(got - target)):.2e}")


if __name__ == "__main__":
    run()
