"""Adiabatic-theory quantities behind power narrowing.

For a pulse Omega(t) at detuning delta, the instantaneous eigenenergy
splitting is eps(t) = sqrt(Omega^2 + delta^2) and the mixing angle is
theta(t) = (1/2) arctan(Omega/delta).  Evolution is adiabatic where
eps >> |d theta/dt|; post-pulse excitation survives only in the detuning
band where this fails.  The border detuning delta_b solves the marginal
condition

    sqrt(Omega(t_m)^2 + delta_b^2) = |delta_b * dOmega/dt(t_m)|
                                     / (Omega(t_m)^2 + delta_b^2)

at the time t_m of strongest nonadiabatic coupling (itself a function of
delta_b, so the solve is nested).  Only exponents and unscaled borders are
exposed: the theory fixes proportionalities, not absolute widths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoRootError, SingularDetuningError, UnsupportedShapeError
from .pulse import PulseSpec, Rectangular, shape_derivative, shape_value


def eigensplitting(omega: float, delta: float) -> float:
    """Instantaneous eigenenergy splitting sqrt(omega^2 + delta^2) in rad/ns."""
    if not (math.isfinite(omega) and math.isfinite(delta)):
        raise ValueError("omega and delta must be finite")
    return math.hypot(omega, delta)


def mixing_angle_rate(spec: PulseSpec, delta: float, t: float) -> float:
    """d/dt of the mixing angle (1/2) arctan(Omega(t)/delta):

        theta_dot = dOmega/dt * delta / (2 (Omega^2 + delta^2))

    using the analytic envelope derivative.  Ill-defined on resonance.
    """
    if delta == 0.0:
        raise SingularDetuningError("mixing angle is ill-defined at delta = 0")
    if not math.isfinite(delta):
        raise ValueError("delta must be finite")
    half = spec.duration / 2.0
    if abs(t) > half:
        raise ValueError(f"t = {t} lies outside the pulse support [{-half}, {half}]")
    omega = spec.peak_rabi * shape_value(spec.shape, spec.width, t)
    omega_dot = spec.peak_rabi * shape_derivative(spec.shape, spec.width, t)
    return omega_dot * delta / (2.0 * (omega * omega + delta * delta))


def _rate_magnitude(spec: PulseSpec, delta: float, t):
    """|theta_dot| vectorized over t (no support check; internal)."""
    omega = spec.peak_rabi * shape_value(spec.shape, spec.width, t)
    omega_dot = spec.peak_rabi * shape_derivative(spec.shape, spec.width, t)
    return np.abs(omega_dot * delta) / (2.0 * (omega * omega + delta * delta))


def _scan_grid(spec: PulseSpec, t_max: float) -> np.ndarray:
    """Scan grid on [0, t_max]: linear through the pulse core plus a
    geometric tail (supports can span ~1e6 widths for n near 1/2)."""
    core = min(4.0 * spec.width, t_max)
    pieces = [np.linspace(0.0, core, 600)]
    if t_max > core:
        pieces.append(np.geomspace(core, t_max, 900))
    return np.unique(np.concatenate(pieces))


def nonadiabatic_peak_time(spec: PulseSpec, delta: float) -> float:
    """Time t_m in [0, t_c] where |theta_dot| peaks (grid scan plus bounded
    golden refinement to 1e-6 * width); returns the edge when the maximum
    sits there."""
    if delta == 0.0:
        raise SingularDetuningError("mixing angle is ill-defined at delta = 0")
    if spec.peak_rabi <= 0.0:
        raise ValueError("peak_rabi must be > 0")
    if isinstance(spec.shape, Rectangular):
        raise UnsupportedShapeError("rectangular envelope has no pointwise theta_dot")
    half = spec.duration / 2.0
    grid = _scan_grid(spec, half)
    values = _rate_magnitude(spec, delta, grid)
    i = int(np.argmax(values))
    if i == len(grid) - 1:
        return half
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if hi <= lo:
        return float(grid[i])
    res = minimize_scalar(lambda t: -float(_rate_magnitude(spec, delta, t)),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-6 * spec.width})
    t_best = float(res.x)
    if _rate_magnitude(spec, delta, t_best) < values[i]:
        t_best = float(grid[i])
    return min(t_best, half)


def _violation_ratio(spec: PulseSpec, delta: float) -> float:
    """rhs/lhs of the marginal adiabatic condition at t_m; > 1 means violated."""
    tm = nonadiabatic_peak_time(spec, delta)
    omega = spec.peak_rabi * shape_value(spec.shape, spec.width, tm)
    omega_dot = spec.peak_rabi * shape_derivative(spec.shape, spec.width, tm)
    g2 = omega * omega + delta * delta
    lhs = math.sqrt(g2)
    rhs = abs(delta * omega_dot) / g2
    return rhs / lhs


def border_detuning(spec: PulseSpec, delta_min: float | None = None,
                    delta_max: float | None = None, rel_tol: float = 1e-8) -> float:
    """Detuning above which the adiabatic condition holds at t_m for good.

    Scans the violation ratio on a log grid over [1e-6, 1e3]/width (by
    default), takes the last violated point, and bisects the upper crossing
    in log(delta).  Returns 0 when no detuning violates the condition (the
    marginal equality has no root; weak or gently truncated pulses), and
    raises NoRootError with the endpoint residuals if violation persists at
    the top of the bracket.
    """
    if spec.peak_rabi <= 0.0:
        raise ValueError("peak_rabi must be > 0")
    lo = delta_min if delta_min is not None else 1e-6 / spec.width
    hi = delta_max if delta_max is not None else 1e3 / spec.width
    grid = np.geomspace(lo, hi, 300)
    ratios = np.array([_violation_ratio(spec, d) for d in grid])
    above = np.nonzero(ratios > 1.0)[0]
    if above.size == 0:
        return 0.0
    i = int(above[-1])
    if i == len(grid) - 1:
        raise NoRootError(
            "adiabatic condition still violated at the top of the detuning bracket",
            residuals=(float(ratios[0] - 1.0), float(ratios[-1] - 1.0)))
    a, b = float(grid[i]), float(grid[i + 1])
    while b / a - 1.0 > rel_tol:
        mid = math.sqrt(a * b)
        if _violation_ratio(spec, mid) > 1.0:
            a = mid
        else:
            b = mid
    return math.sqrt(a * b)


def predicted_exponent(n: float) -> float:
    """Power-narrowing exponent nu = 1/(2n - 1) for the Lorentzian power n:
    the profile width scales as peak_rabi**(-nu) (n = 1 gives nu = 1; n -> 1/2
    strengthens narrowing without bound)."""
    if not (math.isfinite(n) and n > 0.5):
        raise ValueError(f"exponent requires n > 1/2, got {n}")
    return 1.0 / (2.0 * n - 1.0)


def truncation_artifact(edge_rabi: float, delta: float, p_ideal: float) -> float:
    """Amplitude of the cut-off-induced excitation term (oscillations
    neglected):

        P_c = Omega_c^2 / (Omega_c^2 + delta^2) * (1 - p_ideal)

    where Omega_c is the Rabi frequency at the truncation edge.  This term
    power-broadens linearly in Omega_c and is what stops power narrowing from
    reaching arbitrarily small widths at finite truncation.
    """
    if not (0.0 <= p_ideal <= 1.0):
        raise ValueError(f"p_ideal must lie in [0, 1], got {p_ideal}")
    g2 = edge_rabi * edge_rabi + delta * delta
    if g2 == 0.0:
        return 0.0
    return (edge_rabi * edge_rabi / g2) * (1.0 - p_ideal)


@dataclass(frozen=True)
class AdiabaticDiagnostics:
    """Snapshot of the adiabatic analysis at one detuning, plus the border."""

    t_m: float
    theta_dot_max: float
    epsilon_at_tm: float
    border: float


def adiabatic_diagnostics(spec: PulseSpec, delta: float) -> AdiabaticDiagnostics:
    """Peak nonadiabatic coupling time/value and splitting at ``delta``,
    together with the pulse's border detuning."""
    tm = nonadiabatic_peak_time(spec, delta)
    rate = float(_rate_magnitude(spec, delta, tm))
    omega = spec.peak_rabi * shape_value(spec.shape, spec.width, tm)
    try:
        border = border_detuning(spec)
    except NoRootError:
        border = math.nan
    return AdiabaticDiagnostics(t_m=tm, theta_dot_max=rate,
                                epsilon_at_tm=eigensplitting(omega, delta),
                                border=border)
