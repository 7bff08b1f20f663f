#!/usr/bin/env python3
"""Write fig2 and fig4 sweep CSVs for one backend into an output directory."""
import argparse
import pathlib
import sys

from mixphase.cli import main


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", type=pathlib.Path)
    ap.add_argument("--backend", default="amplitude", choices=("amplitude", "circuit", "nmr"))
    ap.add_argument("--config")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    extra = ["--config", args.config] if args.config else []
    for fig in ("fig2", "fig4"):
        if fig == "fig2" and args.backend == "nmr":
            continue  # 5202 spectra; run it explicitly through the CLI if wanted
        out = args.outdir / f"{fig}_{args.backend}.csv"
        code = main([fig, "--backend", args.backend, "--out", str(out), *extra])
        if code:
            return code
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
