"""Oracle and invariant gate behind the ``verify`` CLI subcommand.

Each check recomputes a contract from an independent route (closed forms,
finite differences, brute-force scans, synthetic data) and compares against
the production path.  The gate is deliberately fast (< ~1 min) — the full
acceptance suite lives in the test tree.
"""

from __future__ import annotations

import json
import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import outputs
from .adiabatic import (border_detuning, eigensplitting, mixing_angle_rate,
                        predicted_exponent, truncation_artifact)
from .dynamics import (rabi_rect_oracle, rosen_zener_oracle,
                       transition_probabilities)
from .pulse import (Gaussian, LorentzianPower, PulseSpec, Rectangular, Sech,
                    amplitude_for_area, cutoff_time, hardware_sample,
                    pulse_area, shape_derivative, shape_value)
from .spectro import SpectralProfile, fit_scaling, fwhm, spectral_profile
from .units import mhz_to_radns, radns_to_mhz

_SMOOTH_SHAPES = (LorentzianPower(1.0), LorentzianPower(0.75), Sech(), Gaussian())


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name, passed, detail=""):
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def check_rect_oracle() -> CheckResult:
    width = 1.0  # support [-1, 1], duration 2
    duration = 2.0 * width
    amplitudes = np.linspace(0.45, 9.0, 20) * math.pi / duration
    deltas = np.linspace(-5.0, 5.0, 20) / width
    worst = 0.0
    for w0 in amplitudes:
        spec = PulseSpec(Rectangular(), width, float(w0), 1.0)
        p, _ = transition_probabilities(spec, deltas)
        oracle = np.array([rabi_rect_oracle(w0, d, duration) for d in deltas])
        worst = max(worst, float(np.max(np.abs(p - oracle))))
    return _result("rectangular oracle equivalence", worst <= 1e-10, f"max |diff| = {worst:.2e}")


def check_rosen_zener() -> CheckResult:
    width = 1.0
    deltas = np.linspace(-3.0, 3.0, 21) / width
    worst = 0.0
    for area in (math.pi, 3 * math.pi, 7 * math.pi):
        w0 = area / (math.pi * width)
        spec = PulseSpec(Sech(), width, w0, 1e-6)
        p, _ = transition_probabilities(spec, deltas)
        oracle = np.array([rosen_zener_oracle(w0, width, d) for d in deltas])
        worst = max(worst, float(np.max(np.abs(p - oracle))))
    return _result("Rosen-Zener oracle equivalence", worst <= 1e-4, f"max |diff| = {worst:.2e}")


def check_unitarity_symmetry() -> CheckResult:
    rng = np.random.default_rng(7)
    worst_norm = worst_sym = 0.0
    from .dynamics import transition_amplitudes
    for _ in range(60):
        shape = _SMOOTH_SHAPES[rng.integers(len(_SMOOTH_SHAPES))]
        width = float(rng.uniform(0.5, 20.0))
        eps = float(rng.uniform(0.01, 0.9))
        area = float(rng.uniform(0.2, 9.0) * math.pi)
        w0 = amplitude_for_area(shape, width, eps, area)
        spec = PulseSpec(shape, width, w0, eps)
        delta = float(rng.uniform(0.05, 5.0) / width)
        amps, _, _ = transition_amplitudes(spec, [delta, -delta], tol=None)
        norms = np.abs(amps[0]) ** 2 + np.abs(amps[1]) ** 2
        worst_norm = max(worst_norm, float(np.max(np.abs(norms - 1.0))))
        p = np.abs(amps[1]) ** 2
        worst_sym = max(worst_sym, float(abs(p[0] - p[1])))
    ok = worst_norm <= 1e-10 and worst_sym <= 1e-10
    return _result("unitarity and detuning symmetry", ok,
                   f"norm err {worst_norm:.2e}, asymmetry {worst_sym:.2e}")


def check_area_theorem() -> CheckResult:
    worst = 0.0
    for shape in (LorentzianPower(1.0), Sech(), Gaussian(), Rectangular()):
        for area in (0.5 * math.pi, math.pi, 2.3 * math.pi):
            w0 = amplitude_for_area(shape, 2.0, 0.01, area)
            spec = PulseSpec(shape, 2.0, w0, 0.01)
            p, _ = transition_probabilities(spec, [0.0])
            worst = max(worst, abs(float(p[0]) - math.sin(area / 2.0) ** 2))
    return _result("resonant area theorem", worst <= 1e-8, f"max |diff| = {worst:.2e}")


def check_shape_invariants() -> CheckResult:
    rng = np.random.default_rng(11)
    t = rng.uniform(-50, 50, 200)
    problems = []
    for shape in _SMOOTH_SHAPES + (Rectangular(),):
        f_pos = shape_value(shape, 3.0, t)
        f_neg = shape_value(shape, 3.0, -t)
        if not np.array_equal(f_pos, f_neg):
            problems.append(f"{shape} not even")
    x = np.linspace(0.0, 200.0, 4000)
    f = shape_value(LorentzianPower(0.8), 3.0, x)
    if not np.all(np.diff(f) < 0):
        problems.append("Lorentzian tail not strictly decreasing")
    for shape in _SMOOTH_SHAPES:
        for eps in (0.9, 0.25, 1e-3, 1e-8):
            tc = cutoff_time(shape, 3.0, eps)
            rel = abs(shape_value(shape, 3.0, tc) - eps) / eps
            if rel > 1e-10:
                problems.append(f"{shape} cut at {eps}: rel err {rel:.1e}")
    return _result("shape evenness/monotonicity/cut consistency", not problems,
                   "; ".join(problems) or "all shapes consistent")


def check_derivatives() -> CheckResult:
    rng = np.random.default_rng(3)
    worst = 0.0
    for shape in _SMOOTH_SHAPES:
        width = 2.5
        for _ in range(100):
            t = float(rng.uniform(-8, 8) * width)
            h = 1e-6 * width
            fd = (shape_value(shape, width, t + h) - shape_value(shape, width, t - h)) / (2 * h)
            an = shape_derivative(shape, width, t)
            scale = max(abs(an), 1e-3 / width)
            worst = max(worst, abs(an - fd) / scale)
    return _result("analytic derivative vs finite difference", worst <= 1e-5,
                   f"max rel dev {worst:.2e}")


def check_area_roundtrip() -> CheckResult:
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        shape = _SMOOTH_SHAPES[rng.integers(len(_SMOOTH_SHAPES))]
        width = float(rng.uniform(0.5, 30.0))
        eps = float(rng.uniform(1e-4, 0.9))
        area = float(rng.uniform(0.1, 30.0))
        w0 = amplitude_for_area(shape, width, eps, area)
        got = pulse_area(PulseSpec(shape, width, w0, eps))
        worst = max(worst, abs(got - area) / area)
    return _result("area/amplitude round-trip", worst <= 1e-9, f"max rel err {worst:.2e}")


def check_adiabatic_algebra() -> CheckResult:
    problems = []
    if eigensplitting(3.0, 4.0) != 5.0:
        problems.append("eigensplitting(3,4) != 5")
    spec = PulseSpec(LorentzianPower(1.0), 1.0, 1.0, 1e-3)
    got = mixing_angle_rate(spec, 1.0, 1.0)
    if abs(got - (-0.2)) > 1e-12:
        problems.append(f"theta_dot example: {got} != -0.2")
    rate_pos = mixing_angle_rate(spec, 0.7, 0.9)
    rate_neg = mixing_angle_rate(spec, 0.7, -0.9)
    if abs(rate_pos + rate_neg) > 1e-15:
        problems.append("theta_dot not odd in t")
    # Eq.(5) algebra and far-detuning slope -2
    if abs(truncation_artifact(2.0, 2.0, 0.0) - 0.5) > 1e-15:
        problems.append("truncation artifact at Omega_c = delta != 1/2")
    d1, d2 = 50.0, 500.0
    s = (math.log(truncation_artifact(1.0, d2, 0.0))
         - math.log(truncation_artifact(1.0, d1, 0.0))) / (math.log(d2) - math.log(d1))
    if abs(s + 2.0) > 1e-3:
        problems.append(f"far-wing slope {s:.4f} != -2")
    for n, nu in ((2.0, 1.0 / 3.0), (1.0, 1.0), (0.6, 5.0)):
        if abs(predicted_exponent(n) - nu) > 1e-12:
            problems.append(f"exponent({n}) != {nu}")
    return _result("adiabatic algebra (splitting, theta_dot, Eq-5 term, exponents)",
                   not problems, "; ".join(problems) or "all identities hold")


def check_border_scaling() -> CheckResult:
    widths = 1.0
    db1 = border_detuning(PulseSpec(LorentzianPower(1.0), widths, 10.0, 1e-4))
    db2 = border_detuning(PulseSpec(LorentzianPower(1.0), widths, 20.0, 1e-4))
    ratio = db1 / db2
    return _result("border detuning halves when amplitude doubles (n=1)",
                   abs(ratio - 2.0) <= 0.2, f"ratio = {ratio:.4f}")


def check_fwhm_extraction() -> CheckResult:
    problems = []
    d = np.linspace(-2.0, 2.0, 401)
    tri = np.maximum(0.0, 1.0 - np.abs(d) / 0.8)
    spec = PulseSpec(Rectangular(), 1.0, 1.0, 1.0)
    res = fwhm(SpectralProfile(d, tri, spec, math.pi))
    if abs(res.fwhm - 0.8) > 1e-12:
        problems.append(f"triangle fwhm {res.fwhm} != 0.8")
    width = 1.7
    w0 = 1.0 / width  # pi area sech pulse
    prof = spectral_profile(PulseSpec(Sech(), width, w0, 1e-6),
                            np.linspace(-2.5 / width, 2.5 / width, 401))
    got = fwhm(prof).fwhm
    expect = 4.0 * math.acosh(math.sqrt(2.0)) / (math.pi * width)
    if abs(got - expect) / expect > 1e-3:
        problems.append(f"sech fwhm {got:.6f} != {expect:.6f}")
    return _result("width extraction (triangle exact, sech closed form)",
                   not problems, "; ".join(problems) or "widths match closed forms")


def check_fit_scaling() -> CheckResult:
    amps = np.geomspace(0.1, 10.0, 9)
    fit_nar = fit_scaling([(a, 3.0 / a) for a in amps])
    fit_bro = fit_scaling([(a, 0.2 * a) for a in amps])
    ok = (abs(fit_nar.exponent - 1.0) < 1e-12 and fit_nar.r_squared > 1 - 1e-12
          and abs(fit_bro.exponent + 1.0) < 1e-12)
    return _result("scaling fit on synthetic power laws", ok,
                   f"nu(1/x) = {fit_nar.exponent:.3f}, nu(x) = {fit_bro.exponent:.3f}")


def check_unit_boundary() -> CheckResult:
    vals = np.geomspace(1e-3, 1e3, 13)
    worst = float(np.max(np.abs(radns_to_mhz(mhz_to_radns(vals)) / vals - 1.0)))
    anchor = abs(mhz_to_radns(35.0) - 0.21991148575128555)
    ok = worst <= 1e-12 and anchor <= 1e-12
    return _result("MHz <-> rad/ns boundary", ok,
                   f"round-trip err {worst:.1e}, 35 MHz -> {mhz_to_radns(35.0):.6f} rad/ns")


def check_io_roundtrip() -> CheckResult:
    d = np.linspace(-0.2, 0.2, 41)
    spec = PulseSpec(LorentzianPower(1.0), 5.0, 0.3, 0.05)
    prof = spectral_profile(spec, d)
    with tempfile.TemporaryDirectory() as tmp:
        jpath = Path(tmp) / "profile.json"
        outputs.write_profiles_json(jpath, [(1.0, prof)], config={"check": True})
        (_, d2, p2), = outputs.read_profiles_json(jpath)
        exact = np.array_equal(radns_to_mhz(prof.detunings), d2) and \
            np.array_equal(prof.probabilities, p2)
        cpath = Path(tmp) / "profile.csv"
        outputs.write_profiles_csv(cpath, [(1.0, prof)], config={"check": True})
        (_, d3, p3), = outputs.read_profiles_csv(cpath)
        close = np.allclose(p3, prof.probabilities, rtol=1e-8, atol=1e-12) and \
            np.allclose(d3, radns_to_mhz(prof.detunings), rtol=1e-8)
        meta = json.loads((Path(tmp) / "profile.csv.meta.json").read_text())
        has_meta = "content_sha256" in meta and meta["config"] == {"check": True}
    ok = exact and close and has_meta
    return _result("CSV/JSON round-trip with provenance", ok,
                   f"json exact={exact}, csv at 9 digits={close}, sidecar={has_meta}")


def check_hardware_grid() -> CheckResult:
    spec = PulseSpec(LorentzianPower(1.0), 21.33, 0.3, 0.005)
    wf = hardware_sample(spec)
    ok = abs(wf.samples.size - 2704) <= 1 and abs(wf.duration - 600.89) < 0.05
    return _result("hardware sample grid (2/9 ns, granularity 16)", ok,
                   f"{wf.samples.size} samples, {wf.duration:.2f} ns")


ALL_CHECKS = (
    check_rect_oracle,
    check_rosen_zener,
    check_unitarity_symmetry,
    check_area_theorem,
    check_shape_invariants,
    check_derivatives,
    check_area_roundtrip,
    check_adiabatic_algebra,
    check_border_scaling,
    check_fwhm_extraction,
    check_fit_scaling,
    check_unit_boundary,
    check_io_roundtrip,
    check_hardware_grid,
)


def run_verification():
    """Run every check; returns the list of CheckResult."""
    return [fn() for fn in ALL_CHECKS]
