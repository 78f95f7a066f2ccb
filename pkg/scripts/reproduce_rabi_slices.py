#!/usr/bin/env python3
"""Off-resonant Rabi oscillations vs peak amplitude for the six standard
Lorentzian powers, each slice at its study detuning.  The oscillation
crests damp with amplitude, and the damping strengthens as the power drops:
the slice-level signature of power narrowing.  Writes results/slice_n*.
"""

import sys

from powernarrow.cli import main

SLICES = [
    ("2", "30"), ("3/2", "25"), ("1", "12.5"),
    ("3/4", "12.5"), ("2/3", "12.5"), ("3/5", "12.5"),
]

if __name__ == "__main__":
    for n, delta_mhz in SLICES:
        tag = n.replace("/", "_")
        code = main([
            "slice", "--n", n, "--cut", "0.005",
            "--delta", delta_mhz,
            "--rsteps", "200", "--max-area", "13",
            "--svg", "--out", f"results/slice_n{tag}",
        ])
        if code != 0:
            sys.exit(code)
    sys.exit(0)
