"""Command-line front end.

Boundary convention: every frequency on a flag or in an output file is an
ordinary frequency in MHz; the conversion to internal angular rad/ns happens
here and nowhere else (1 MHz = 2*pi*1e-3 rad/ns).  Pulse areas are given in
units of pi.

Exit codes: 0 success, 2 argument errors (usage goes to stderr), 1
computation or I/O errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import outputs, svgplot
from .errors import ResourceLimitError
from .pulse import (HARDWARE_DT, Gaussian, LorentzianPower, PulseSpec,
                    Rectangular, Sech, amplitude_for_area, hardware_sample,
                    pulse_area, sample)
from .spectro import (cutoff_study, excitation_landscape, fwhm_for_area,
                      profile_for_area, rabi_slice, scaling_study)
from .units import mhz_to_radns, radns_to_mhz
from .verify import run_verification

#: Pulse widths (ns) used by the standard narrowing studies, keyed by the
#: Lorentzian power rounded to 3 digits.
STANDARD_WIDTHS = {2.0: 24.89, 1.5: 24.89, 1.0: 24.89,
                   0.75: 10.67, 0.667: 10.67, 0.6: 5.33}


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: defaults < config file < command-line flags."""

    command: str
    shape: str = "lorentzian"
    n: tuple = (1.0,)
    width: tuple | None = None            # ns, matched to n (single value broadcasts)
    cut: float = 0.005
    cuts: tuple = (0.5, 0.03, 0.005)      # cutoff-study levels
    areas: tuple = (1.0, 3.0, 7.0)        # units of pi
    delta_min: float = -35.0              # MHz
    delta_max: float = 35.0               # MHz
    delta_steps: int = 141
    rabi_min: float | None = None         # MHz
    rabi_max: float | None = None         # MHz
    rabi_steps: int = 61
    max_area: float = 9.0                 # pi units; sets rabi_max when absent
    delta: float = 12.5                   # MHz, slice detuning
    omega0: float | None = None           # MHz, explicit amplitude
    scale: float | None = None            # MHz, export normalization scale
    dt: float = HARDWARE_DT               # ns, export sample interval
    max_samples: int = 65536
    shots: int | None = None
    seed: int = 1234
    workers: int | None = None
    tol: float = 1e-8
    out: str = "results/run"
    fmt: str = "csv"
    svg: bool = False

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _fraction(text: str) -> float:
    """Float parser accepting fractions like 2/3 (exact where it matters)."""
    try:
        return float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _num_list(text: str) -> tuple:
    return tuple(_fraction(part) for part in text.split(",") if part.strip())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powernarrow",
        description="Two-level pulsed-spectroscopy studies: line profiles, "
                    "excitation landscapes, power narrowing and truncation effects. "
                    "All frequencies on this boundary are ordinary MHz.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, shapeful=True):
        p.add_argument("--config", help="JSON config file (flags override it)")
        p.add_argument("--print-config", action="store_true",
                       help="print the resolved configuration and exit")
        p.add_argument("--out", help="output path base (extension added per format)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json", "both"),
                       help="artifact format (default csv)")
        p.add_argument("--svg", action="store_true", default=None,
                       help="also render a static SVG plot")
        p.add_argument("--workers", type=int, help="sweep worker count (default: all cores)")
        p.add_argument("--tol", type=float, help="step-refinement target on P (default 1e-8)")
        p.add_argument("--shots", type=int,
                       help="emulate N-shot averaging (e.g. 1024) with a seeded RNG")
        p.add_argument("--seed", type=int, help="RNG seed for shot noise")
        if shapeful:
            p.add_argument("--shape", choices=("lorentzian", "rectangular", "sech", "gaussian"),
                           help="pulse shape family (default lorentzian)")
            p.add_argument("--n", type=_num_list,
                           help="Lorentzian power(s), e.g. 1 or 2,1.5,1,0.75,2/3,0.6")
            p.add_argument("--T", dest="width", type=_num_list,
                           help="pulse width(s) in ns (single value broadcasts)")
            p.add_argument("--cut", type=_fraction,
                           help="truncation amplitude fraction in (0, 1] (default 0.005)")

    def add_delta_grid(p):
        p.add_argument("--dmin", dest="delta_min", type=float, help="detuning grid min (MHz)")
        p.add_argument("--dmax", dest="delta_max", type=float, help="detuning grid max (MHz)")
        p.add_argument("--dsteps", dest="delta_steps", type=int,
                       help="detuning grid points (default 141)")

    def add_rabi_grid(p):
        p.add_argument("--rmin", dest="rabi_min", type=float, help="amplitude grid min (MHz)")
        p.add_argument("--rmax", dest="rabi_max", type=float, help="amplitude grid max (MHz)")
        p.add_argument("--rsteps", dest="rabi_steps", type=int,
                       help="amplitude grid points (default 61)")
        p.add_argument("--max-area", dest="max_area", type=_fraction,
                       help="amplitude grid spans areas up to this (pi units, default 9)")

    p = sub.add_parser("profile", help="spectral profiles at fixed pulse areas")
    add_common(p); add_delta_grid(p)
    p.add_argument("--areas", type=_num_list, help="areas in pi units (default 1,3,7)")

    p = sub.add_parser("landscape", help="P over the (amplitude, detuning) grid")
    add_common(p); add_delta_grid(p); add_rabi_grid(p)

    p = sub.add_parser("slice", help="off-resonant Rabi oscillation vs amplitude")
    add_common(p); add_rabi_grid(p)
    p.add_argument("--delta", type=float, help="fixed detuning (MHz, default 12.5)")

    p = sub.add_parser("fwhm-table", help="per-shape FWHM at selected areas")
    add_common(p); add_delta_grid(p)
    p.add_argument("--areas", type=_num_list, help="areas in pi units (default 1,3,7)")

    p = sub.add_parser("scaling", help="narrowing-exponent fit over an area ladder")
    add_common(p)
    p.add_argument("--areas", type=_num_list,
                   help="fitted areas in pi units (default 3,5,7,9,11,13,15)")

    p = sub.add_parser("cutoff-study", help="broadening->narrowing crossover vs truncation")
    add_common(p); add_delta_grid(p); add_rabi_grid(p)
    p.add_argument("--cuts", type=_num_list,
                   help="truncation fractions (default 0.5,0.03,0.005)")

    p = sub.add_parser("export-samples", help="hardware-grid waveform export (JSON)")
    add_common(p)
    p.add_argument("--area", dest="areas", type=_num_list,
                   help="pulse area in pi units (default 1)")
    p.add_argument("--omega0", type=float, help="peak amplitude (MHz) instead of --area")
    p.add_argument("--scale", type=float,
                   help="normalization scale (MHz); amplitudes are Omega/scale (default: peak)")
    p.add_argument("--dt", type=float, help="sample interval in ns (default 2/9)")
    p.add_argument("--max-samples", dest="max_samples", type=int,
                   help="resource cap on waveform length (default 65536)")

    p = sub.add_parser("verify", help="run the oracle and invariant gate")
    add_common(p, shapeful=False)

    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < explicitly passed flags."""
    values = {"command": args.command}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(file_cfg) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key, val in file_cfg.items():
            values[key] = tuple(val) if isinstance(val, list) else val
    for field in dataclasses.fields(RunConfig):
        flag = getattr(args, field.name, None)
        if flag is not None and field.name != "command":
            values[field.name] = flag
    defaults = {"scaling": {"areas": (3.0, 5.0, 7.0, 9.0, 11.0, 13.0, 15.0)},
                "export-samples": {"areas": (1.0,)}}.get(args.command, {})
    for key, val in defaults.items():
        values.setdefault(key, val)
    return RunConfig(**values)


def _validate(parser, cfg: RunConfig):
    def fail(msg):
        parser.error(msg)  # prints usage to stderr and exits 2
    if not (0.0 < cfg.cut <= 1.0):
        fail(f"--cut must lie in (0, 1], got {cfg.cut}")
    if any(not (0.0 < c <= 1.0) for c in cfg.cuts):
        fail(f"--cuts must lie in (0, 1], got {cfg.cuts}")
    if cfg.delta_steps < 2 or cfg.rabi_steps < 1:
        fail("grid step counts must be at least 2 (detuning) / 1 (amplitude)")
    if cfg.delta_min >= cfg.delta_max:
        fail(f"empty detuning range [{cfg.delta_min}, {cfg.delta_max}] MHz")
    if (cfg.rabi_min is None) != (cfg.rabi_max is None):
        fail("--rmin and --rmax must be given together")
    if cfg.rabi_min is not None and not (0.0 <= cfg.rabi_min < cfg.rabi_max):
        fail(f"empty amplitude range [{cfg.rabi_min}, {cfg.rabi_max}] MHz")
    if cfg.shape == "lorentzian" and any(v <= 0.5 for v in cfg.n):
        fail(f"Lorentzian power must exceed 1/2, got {cfg.n}")
    if any(a <= 0 for a in cfg.areas):
        fail(f"areas must be positive, got {cfg.areas}")
    if cfg.width is not None and any(w <= 0 for w in cfg.width):
        fail(f"widths must be positive, got {cfg.width}")
    if cfg.tol is not None and cfg.tol <= 0:
        fail("--tol must be positive")
    if cfg.shots is not None and cfg.shots < 1:
        fail("--shots must be >= 1")


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _shape_for(cfg: RunConfig, n: float | None = None):
    if cfg.shape == "lorentzian":
        return LorentzianPower(n if n is not None else cfg.n[0])
    return {"rectangular": Rectangular, "sech": Sech, "gaussian": Gaussian}[cfg.shape]()


def _resolved_widths(cfg: RunConfig) -> tuple:
    """One width per entry of cfg.n (standard study widths when omitted)."""
    if cfg.width is not None:
        if len(cfg.width) == 1:
            return cfg.width * len(cfg.n)
        if len(cfg.width) != len(cfg.n):
            raise ValueError(f"--T got {len(cfg.width)} widths for {len(cfg.n)} powers")
        return cfg.width
    if cfg.shape != "lorentzian":
        raise ValueError("--T is required for non-Lorentzian shapes")
    try:
        return tuple(STANDARD_WIDTHS[round(v, 3)] for v in cfg.n)
    except KeyError:
        raise ValueError(f"--T is required for powers outside the standard set "
                         f"{sorted(STANDARD_WIDTHS)}") from None


def _delta_grid(cfg: RunConfig) -> np.ndarray:
    return mhz_to_radns(np.linspace(cfg.delta_min, cfg.delta_max, cfg.delta_steps))


def _rabi_grid(cfg: RunConfig, shape, width) -> np.ndarray:
    if cfg.rabi_min is not None:
        return mhz_to_radns(np.linspace(cfg.rabi_min, cfg.rabi_max, cfg.rabi_steps))
    top = amplitude_for_area(shape, width, cfg.cut, cfg.max_area * math.pi)
    return np.linspace(top / cfg.rabi_steps, top, cfg.rabi_steps)


def _out_base(cfg: RunConfig) -> Path:
    return Path(cfg.out if cfg.out else "results/run")


def _emit(cfg: RunConfig, base: Path, csv_writer, json_writer) -> list:
    written = []
    if cfg.fmt in ("csv", "both"):
        written.append(csv_writer(base.with_suffix(".csv")))
    if cfg.fmt in ("json", "both"):
        written.append(json_writer(base.with_suffix(".json")))
    return written


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_profile(cfg: RunConfig) -> list:
    widths = _resolved_widths(cfg)
    shape = _shape_for(cfg)
    grid = _delta_grid(cfg)
    labeled = []
    for area_pi in cfg.areas:
        prof = profile_for_area(shape, widths[0], cfg.cut, area_pi * math.pi,
                                grid, tol=cfg.tol)
        if cfg.shots is not None:
            rng = np.random.default_rng([cfg.seed, int(round(area_pi * 1000))])
            noisy = rng.binomial(cfg.shots, np.clip(prof.probabilities, 0, 1)) / cfg.shots
            prof = dataclasses.replace(prof, probabilities=noisy)
        labeled.append((area_pi, prof))
    base = _out_base(cfg)
    written = _emit(cfg, base,
                    lambda p: outputs.write_profiles_csv(p, labeled, cfg.to_dict()),
                    lambda p: outputs.write_profiles_json(p, labeled, cfg.to_dict()))
    if cfg.svg:
        doc = svgplot.line_plot_svg(
            radns_to_mhz(grid),
            [(f"area {a:g}π", prof.probabilities) for a, prof in labeled],
            "Δ/2π (MHz)", "transition probability",
            f"{cfg.shape} n={cfg.n[0]:g} T={widths[0]:g} ns cut={cfg.cut:g}")
        written.append(outputs._write_text(base.with_suffix(".svg"), doc))
    return written


def _cmd_landscape(cfg: RunConfig) -> list:
    widths = _resolved_widths(cfg)
    shape = _shape_for(cfg)
    d = _delta_grid(cfg)
    r = _rabi_grid(cfg, shape, widths[0])
    scape = excitation_landscape(shape, widths[0], cfg.cut, r, d,
                                 workers=cfg.workers, tol=cfg.tol,
                                 shots=cfg.shots, seed=cfg.seed if cfg.shots else None)
    base = _out_base(cfg)
    written = _emit(cfg, base,
                    lambda p: outputs.write_landscape_csv(p, scape, cfg.to_dict()),
                    lambda p: outputs.write_landscape_json(p, scape, cfg.to_dict()))
    if cfg.svg:
        doc = svgplot.heatmap_svg(radns_to_mhz(d), radns_to_mhz(r), scape.probabilities,
                                  "Δ/2π (MHz)", "Ω₀/2π (MHz)",
                                  f"{cfg.shape} n={cfg.n[0]:g} T={widths[0]:g} ns cut={cfg.cut:g}")
        written.append(outputs._write_text(base.with_suffix(".svg"), doc))
    return written


def _cmd_slice(cfg: RunConfig) -> list:
    widths = _resolved_widths(cfg)
    shape = _shape_for(cfg)
    r = _rabi_grid(cfg, shape, widths[0])
    probs = rabi_slice(shape, widths[0], cfg.cut, mhz_to_radns(cfg.delta), r,
                       workers=cfg.workers, tol=cfg.tol,
                       shots=cfg.shots, seed=cfg.seed if cfg.shots else None)
    base = _out_base(cfg)
    payload = {"delta_MHz": cfg.delta,
               "omega0_MHz": [float(x) for x in radns_to_mhz(r)],
               "p": [float(x) for x in probs]}
    written = _emit(cfg, base,
                    lambda p: outputs.write_slice_csv(p, r, probs, cfg.to_dict()),
                    lambda p: outputs.write_json_document(p, payload, cfg.to_dict(), "slice"))
    if cfg.svg:
        doc = svgplot.line_plot_svg(radns_to_mhz(r), [(f"Δ/2π = {cfg.delta:g} MHz", probs)],
                                    "Ω₀/2π (MHz)", "transition probability",
                                    f"{cfg.shape} n={cfg.n[0]:g} off-resonant Rabi slice")
        written.append(outputs._write_text(base.with_suffix(".svg"), doc))
    return written


def _cmd_fwhm_table(cfg: RunConfig) -> list:
    widths = _resolved_widths(cfg)
    rows = []
    for n_val, width in zip(cfg.n, widths):
        shape = _shape_for(cfg, n_val)
        per_area = {}
        for area_pi in cfg.areas:
            result, _ = fwhm_for_area(shape, width, cfg.cut, area_pi * math.pi,
                                      tol=cfg.tol)
            per_area[area_pi] = radns_to_mhz(result.fwhm)
        ratio = (per_area.get(1.0, math.nan) / per_area.get(7.0, math.nan)
                 if 1.0 in per_area and 7.0 in per_area else math.nan)
        for area_pi in cfg.areas:
            rows.append({"n": n_val, "area_over_pi": area_pi,
                         "fwhm_MHz": per_area[area_pi], "ratio_pi_over_7pi": ratio})
    base = _out_base(cfg)
    payload = {"rows": rows}
    return _emit(cfg, base,
                 lambda p: outputs.write_fwhm_table_csv(p, rows, cfg.to_dict()),
                 lambda p: outputs.write_json_document(p, payload, cfg.to_dict(), "fwhm_table"))


def _cmd_scaling(cfg: RunConfig) -> list:
    widths = _resolved_widths(cfg)
    entries = []
    for n_val, width in zip(cfg.n, widths):
        shape = _shape_for(cfg, n_val)
        points, fit = scaling_study(shape, width, cfg.cut,
                                    [a * math.pi for a in cfg.areas], tol=cfg.tol)
        entries.append((n_val, points, fit))
    base = _out_base(cfg)
    written = [outputs.write_scaling_json(base.with_suffix(".json"), entries, cfg.to_dict())]
    if cfg.fmt in ("csv", "both"):
        rows = []
        for n_val, points, _ in entries:
            for (w0, width_val), area_pi in zip(points, cfg.areas):
                rows.append({"n": n_val, "area_over_pi": area_pi,
                             "omega0_MHz": radns_to_mhz(w0),
                             "fwhm_MHz": radns_to_mhz(width_val)})
        written.append(outputs.write_scaling_points_csv(base.with_suffix(".csv"), rows,
                                                        cfg.to_dict()))
    return written


def _cmd_cutoff_study(cfg: RunConfig) -> list:
    widths = _resolved_widths(cfg)
    shape = _shape_for(cfg)
    d = _delta_grid(cfg)
    base = _out_base(cfg)
    written = []
    summary = []
    for eps in cfg.cuts:
        r = _rabi_grid(dataclasses.replace(cfg, cut=eps), shape, widths[0])
        entries = cutoff_study(shape, widths[0], [eps], r, d,
                               workers=cfg.workers, tol=cfg.tol)
        entry = entries[0]
        tag = f"{eps:g}".replace(".", "p")
        written.append(outputs.write_landscape_csv(
            base.parent / f"{base.name}_cut{tag}.csv", entry.landscape, cfg.to_dict()))
        if cfg.svg:
            doc = svgplot.heatmap_svg(radns_to_mhz(d), radns_to_mhz(r),
                                      entry.landscape.probabilities,
                                      "Δ/2π (MHz)", "Ω₀/2π (MHz)",
                                      f"cut = {eps:g}")
            written.append(outputs._write_text(base.parent / f"{base.name}_cut{tag}.svg", doc))
        for area_pi, res in entry.peak_widths:
            summary.append({"eps_cut": eps, "area_over_pi": float(area_pi),
                            "fwhm_MHz": radns_to_mhz(res.fwhm)})
    written.append(outputs.write_cutoff_summary_csv(
        base.parent / f"{base.name}_summary.csv", summary, cfg.to_dict()))
    return written


def _cmd_export_samples(cfg: RunConfig) -> list:
    widths = _resolved_widths(cfg)
    shape = _shape_for(cfg)
    if cfg.omega0 is not None:
        w0 = mhz_to_radns(cfg.omega0)
    else:
        w0 = amplitude_for_area(shape, widths[0], cfg.cut, cfg.areas[0] * math.pi)
    spec = PulseSpec(shape, widths[0], w0, cfg.cut)
    if abs(cfg.dt - HARDWARE_DT) < 1e-12:
        waveform = hardware_sample(spec)
    else:
        waveform = sample(spec, cfg.dt)
    if waveform.samples.size > cfg.max_samples:
        raise ResourceLimitError(
            f"waveform needs {waveform.samples.size} samples; the platform cap "
            f"is {cfg.max_samples} (pulse duration too long for the grid)")
    scale = mhz_to_radns(cfg.scale) if cfg.scale is not None else max(spec.peak_rabi, 1e-300)
    if np.max(waveform.samples) > scale * (1 + 1e-12):
        raise ValueError(f"scale {cfg.scale} MHz is below the waveform peak "
                         f"{radns_to_mhz(np.max(waveform.samples)):g} MHz")
    n_val = cfg.n[0] if cfg.shape == "lorentzian" else None
    payload = outputs.samples_payload(waveform, scale, cfg.shape, n_val, widths[0],
                                      cfg.cut, pulse_area(spec))
    base = _out_base(cfg)
    return [outputs.write_samples_json(base.with_suffix(".json"), payload, cfg.to_dict())]


def _cmd_verify(cfg: RunConfig) -> int:
    results = run_verification()
    failed = 0
    for res in results:
        line = f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}"
        print(line)
        failed += 0 if res.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


_COMMANDS = {
    "profile": _cmd_profile,
    "landscape": _cmd_landscape,
    "slice": _cmd_slice,
    "fwhm-table": _cmd_fwhm_table,
    "scaling": _cmd_scaling,
    "cutoff-study": _cmd_cutoff_study,
    "export-samples": _cmd_export_samples,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        _validate(parser, cfg)
        if cfg.command != "verify":
            _resolved_widths(cfg)  # surface width/power mismatches as argument errors
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "print_config", False):
        print(json.dumps(cfg.to_dict(), indent=2, sort_keys=True))
        return 0
    try:
        if cfg.command == "verify":
            return _cmd_verify(cfg)
        written = _COMMANDS[cfg.command](cfg)
        for path in written:
            print(path)
        return 0
    except Exception as exc:  # computation / I/O failures
        print(f"error: {exc}", file=sys.stderr)
        return 1
