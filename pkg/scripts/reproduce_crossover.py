#!/usr/bin/env python3
"""Truncation crossover study: excitation landscapes for a 21.33 ns
Lorentzian pulse truncated at 50%, 3% and 0.5% of its peak, plus the
per-resonance FWHM summary showing power broadening flip to power narrowing
as the cut moves out.  Writes CSV landscapes, a summary table and SVG
heatmaps under results/crossover*.
"""

import sys

from powernarrow.cli import main

if __name__ == "__main__":
    sys.exit(main([
        "cutoff-study",
        "--n", "1", "--T", "21.33",
        "--cuts", "0.5,0.03,0.005",
        "--dmin", "-35", "--dmax", "35", "--dsteps", "100",
        "--rsteps", "100", "--max-area", "9.2",
        "--svg",
        "--out", "results/crossover",
    ]))
