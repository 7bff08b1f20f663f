"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 check failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import math
import sys
from typing import Optional, Sequence

from .checks import Faults, check_suite
from .config import Config, load_config
from .nmr import acquire_fid, fid_to_csv, spectrum_to_csv
from .circuit import final_register, run_pseudo_pure
from .phases import SCHEMES, TWO_PI, closed_form, make_scheme
from .purification import MixedQubit
from .sweep import BACKENDS, SweepSpec, csv_text, evaluate_point, fig2_specs, fig4_specs, run_many, sweep_metadata

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, out=True) -> None:
    p.add_argument("--config", help="key = value file overriding defaults")
    p.add_argument("--omega-s-t", type=float, default=TWO_PI, help="system rotation angle (default 2 pi)")
    if out:
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp metadata line")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixphase", description="Mixed-state geometric phase simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("phase", help="evaluate one (r, theta_s) point")
    _common(p, out=False)
    p.add_argument("--scheme", choices=(*SCHEMES, "both"), default="both")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--theta-s", type=float, required=True)
    p.add_argument("--backend", choices=BACKENDS, default="amplitude")

    p = sub.add_parser("sweep", help="sweep r at fixed theta_s, or theta_s at fixed r")
    _common(p)
    p.add_argument("--scheme", choices=(*SCHEMES, "both"), default="both")
    fixed = p.add_mutually_exclusive_group(required=True)
    fixed.add_argument("--r", type=float, help="fix r and sweep theta_s")
    fixed.add_argument("--theta-s", type=float, help="fix theta_s and sweep r")
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--backend", choices=BACKENDS, default="amplitude")

    for name, text in (("fig2", "51x51 (r, theta_s) surfaces"), ("fig4", "the four 13-point experiment sweeps")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--backend", choices=BACKENDS, default="amplitude")

    p = sub.add_parser("nmr", help="full NMR readout at one point")
    _common(p, out=False)
    p.add_argument("--scheme", choices=SCHEMES, default="sjoqvist")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--theta-s", type=float, required=True)
    p.add_argument("--out", help="write the spectrum CSV here")
    p.add_argument("--fid-out", help="write the FID CSV here")

    p = sub.add_parser("check", help="run every invariant check")
    p.add_argument("--config")
    p.add_argument("--inject-theta-a-shift", type=float, default=0.0, help=argparse.SUPPRESS)
    p.add_argument("--inject-rate-sign", type=float, default=-1.0, help=argparse.SUPPRESS)
    p.add_argument("--inject-coefficient", type=float, default=1.0, help=argparse.SUPPRESS)
    return parser


def _config(args) -> Config:
    if not args.config:
        return Config()
    try:
        return load_config(args.config)
    except OSError as exc:
        raise OSError(f"cannot read config: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write(text: str, dest: Optional[str]) -> None:
    if dest is None:
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit_sweeps(specs, cfg, args) -> int:
    rows = run_many(specs, cfg)
    stamp = None if args.no_timestamp else _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    _write(csv_text(rows, sweep_metadata(specs, rows, stamp)), args.out)
    return EXIT_OK


def _fmt(x: float) -> str:
    return "undefined" if math.isnan(x) else f"{x:+.12f}"


def cmd_phase(args, cfg: Config) -> int:
    tags = SCHEMES if args.scheme == "both" else (args.scheme,)
    print("scheme     phase_rad         visibility      closed_form_rad")
    for tag in tags:
        phase, vis, cf = evaluate_point((tag, args.r, args.theta_s, args.omega_s_t, args.backend, cfg))
        print(f"{tag:<10s} {_fmt(phase)}  {vis:.12f}  {_fmt(cf)}")
    return EXIT_OK


def cmd_sweep(args, cfg: Config) -> int:
    if args.r is not None:
        spec = SweepSpec(args.scheme, "theta_s", args.r, args.points, args.omega_s_t, args.backend)
    else:
        spec = SweepSpec(args.scheme, "r", args.theta_s, args.points, args.omega_s_t, args.backend)
    return _emit_sweeps([spec], cfg, args)


def cmd_fig(args, cfg: Config) -> int:
    make = fig2_specs if args.command == "fig2" else fig4_specs
    return _emit_sweeps(make(cfg, args.backend, args.omega_s_t), cfg, args)


def cmd_nmr(args, cfg: Config) -> int:
    state = MixedQubit.from_purity(args.r)
    scheme = make_scheme(args.scheme, state, args.theta_s, cfg.omega_s)
    exp = cfg.nmr()
    spectral = exp.measure(state, scheme, args.omega_s_t)
    dm = run_pseudo_pure(state, scheme, exp.pseudo_pure, args.omega_s_t)
    print(f"spectral phase      {_fmt(spectral.phase)} rad  (visibility {spectral.visibility:.6f})")
    print(f"density-matrix phase {_fmt(dm.phase)} rad  (visibility {dm.visibility:.6e})")
    print(f"closed form         {_fmt(closed_form(args.scheme, state, scheme, args.omega_s_t))} rad")
    if args.out or args.fid_out:
        fid = acquire_fid(final_register(state, scheme, args.omega_s_t, exp.pseudo_pure), exp.sys, exp.acq)
        if args.fid_out:
            fid_to_csv(fid, args.fid_out)
        if args.out:
            spectrum_to_csv(exp.spectrum(final_register(state, scheme, args.omega_s_t, exp.pseudo_pure)), args.out)
    return EXIT_OK


def cmd_check(args, cfg: Config) -> int:
    faults = Faults(args.inject_theta_a_shift, args.inject_rate_sign, args.inject_coefficient)
    results = check_suite(cfg, faults)
    for res in results:
        print(res.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK
    print(f"all {len(results)} checks passed")
    return EXIT_OK


COMMANDS = {"phase": cmd_phase, "sweep": cmd_sweep, "fig2": cmd_fig, "fig4": cmd_fig, "nmr": cmd_nmr, "check": cmd_check}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, ValueError) as exc:
        print(f"mixphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mixphase: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
