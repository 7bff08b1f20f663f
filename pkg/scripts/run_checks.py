#!/usr/bin/env python3
"""Run the invariant check suite, then the same suite with each fault injected."""
import sys

from mixphase.cli import main

FAULTS = {
    "theta_a shifted by 1e-3": ["--inject-theta-a-shift", "1e-3"],
    "unsigned ancilla rate in the closed form": ["--inject-rate-sign", "1"],
    "denominator coefficient 2": ["--inject-coefficient", "2"],
}

if __name__ == "__main__":
    status = main(["check"])
    for label, flags in FAULTS.items():
        print(f"\n== fault: {label}")
        print(f"exit code {main(['check', *flags])}")
    sys.exit(status)
