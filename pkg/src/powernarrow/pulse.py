"""Pulse shape families, truncation geometry, areas and discrete sampling.

All shapes are even, peak-normalized envelopes f(t) with f(0) = 1.  A pulse
is the envelope scaled by the peak Rabi frequency and truncated symmetrically
where the envelope falls to the amplitude fraction ``cutoff_fraction``:

    Omega(t) = peak_rabi * f(t)   for |t| <= t_c,   0 outside,

with f(t_c) = cutoff_fraction.  Truncated pulses are deliberately not
renormalized or re-shifted: the hard jump from ``peak_rabi * cutoff_fraction``
to zero at the edges is physical and drives the cut-off broadening studied
elsewhere in this package.

Times are in ns, Rabi frequencies in rad/ns (angular).  The pulse width
parameter is called ``width`` throughout; the literature uses T and tau
interchangeably for the same quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DegenerateSamplingError, UnsupportedShapeError

#: Hardware waveform sample interval (ns).
HARDWARE_DT = 2.0 / 9.0

#: Hardware waveforms must contain a multiple of this many samples.
HARDWARE_GRANULARITY = 16


# ---------------------------------------------------------------------------
# Shape families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LorentzianPower:
    """Envelope [1 + (t/T)^2]^(-n).  Requires n > 1/2 so the tail area
    converges; powers closer to 1/2 have longer tails."""

    n: float

    def __post_init__(self):
        n = float(self.n)
        if not math.isfinite(n) or n <= 0.5:
            raise ValueError(f"LorentzianPower requires finite n > 1/2, got {self.n}")
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class Rectangular:
    """Flat envelope: 1 on [-T, T], 0 outside.  The cutoff fraction is
    ignored for this shape (the support is always [-T, T])."""


@dataclass(frozen=True)
class Sech:
    """Envelope sech(t/T)."""


@dataclass(frozen=True)
class Gaussian:
    """Envelope exp(-t^2 / (2 T^2))."""


ShapeFamily = LorentzianPower | Rectangular | Sech | Gaussian


def _check_finite(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return arr


def shape_value(shape: ShapeFamily, width: float, t):
    """Evaluate the peak-normalized envelope f(t).

    Parameters
    ----------
    shape : ShapeFamily
    width : float
        Width parameter T in ns, > 0.
    t : float or array_like
        Time(s) in ns.

    Returns
    -------
    float or ndarray, matching the shape of ``t``.
    """
    if not (math.isfinite(width) and width > 0):
        raise ValueError(f"width must be finite and > 0, got {width}")
    tt = _check_finite("t", t)
    x2 = (tt / width) ** 2
    if isinstance(shape, LorentzianPower):
        out = (1.0 + x2) ** (-shape.n)
    elif isinstance(shape, Sech):
        out = 1.0 / np.cosh(tt / width)
    elif isinstance(shape, Gaussian):
        out = np.exp(-0.5 * x2)
    elif isinstance(shape, Rectangular):
        out = np.where(np.abs(tt) <= width, 1.0, 0.0)
    else:
        raise TypeError(f"unknown shape {shape!r}")
    return out if isinstance(out, np.ndarray) and np.ndim(t) else float(out)


def shape_derivative(shape: ShapeFamily, width: float, t):
    """Analytic envelope derivative df/dt in 1/ns.

    Odd in t, zero at t = 0.  The rectangular envelope has no pointwise
    derivative at its edges and is rejected.
    """
    if not (math.isfinite(width) and width > 0):
        raise ValueError(f"width must be finite and > 0, got {width}")
    if isinstance(shape, Rectangular):
        raise UnsupportedShapeError("rectangular envelope has a distributional derivative")
    tt = _check_finite("t", t)
    x = tt / width
    if isinstance(shape, LorentzianPower):
        out = -2.0 * shape.n * x * (1.0 + x * x) ** (-shape.n - 1.0) / width
    elif isinstance(shape, Sech):
        out = -np.tanh(x) / np.cosh(x) / width
    elif isinstance(shape, Gaussian):
        out = -x * np.exp(-0.5 * x * x) / width
    else:
        raise TypeError(f"unknown shape {shape!r}")
    return out if isinstance(out, np.ndarray) and np.ndim(t) else float(out)


def cutoff_time(shape: ShapeFamily, width: float, cutoff_fraction: float) -> float:
    """Time t_c >= 0 at which the envelope equals ``cutoff_fraction``.

    Every supported envelope is strictly decreasing on t >= 0, so the
    crossing time is available in closed form; for the rectangular shape the
    fraction is ignored and the support half-width T is returned.
    """
    if not (math.isfinite(width) and width > 0):
        raise ValueError(f"width must be finite and > 0, got {width}")
    eps = float(cutoff_fraction)
    if not (math.isfinite(eps) and 0.0 < eps <= 1.0):
        raise ValueError(f"cutoff_fraction must lie in (0, 1], got {cutoff_fraction}")
    if isinstance(shape, Rectangular):
        return width
    if isinstance(shape, LorentzianPower):
        return width * math.sqrt(max(eps ** (-1.0 / shape.n) - 1.0, 0.0))
    if isinstance(shape, Sech):
        return width * math.acosh(1.0 / eps)
    if isinstance(shape, Gaussian):
        return width * math.sqrt(-2.0 * math.log(eps))
    raise TypeError(f"unknown shape {shape!r}")


def _envelope_half_integral(shape: ShapeFamily, width: float, half_width: float) -> float:
    """integral of f(t) dt over [0, half_width], adaptive to rel. 1e-12.

    Lorentzian powers use the substitution t = T tan(u), which maps the
    slowly decaying tail onto a bounded, well-behaved integrand: the direct
    integral over supports of ~1e7 widths defeats adaptive subdivision for
    n near 1/2.
    """
    if half_width <= 0.0:
        return 0.0
    if isinstance(shape, Rectangular):
        return min(half_width, width)
    if isinstance(shape, LorentzianPower):
        n = shape.n
        theta = math.atan2(half_width, width)
        val, _ = quad(lambda u: math.cos(u) ** (2.0 * n - 2.0), 0.0, theta,
                      epsabs=0.0, epsrel=1e-12, limit=300)
        return width * val
    val, _ = quad(lambda t: shape_value(shape, width, t), 0.0, half_width,
                  epsabs=0.0, epsrel=1e-12, limit=300,
                  points=[min(width, half_width)] if half_width > width else None)
    return val


# ---------------------------------------------------------------------------
# Pulse specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PulseSpec:
    """A fully determined pulse: shape family, width T (ns), peak Rabi
    frequency (rad/ns), amplitude cutoff fraction, and an optional duration
    override (ns) used when a hardware grid dictates the support length.
    """

    shape: ShapeFamily
    width: float
    peak_rabi: float
    cutoff_fraction: float
    duration_override: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError(f"width must be > 0, got {self.width}")
        if not (math.isfinite(self.peak_rabi) and self.peak_rabi >= 0):
            raise ValueError(f"peak_rabi must be >= 0, got {self.peak_rabi}")
        eps = float(self.cutoff_fraction)
        if not (math.isfinite(eps) and 0.0 < eps <= 1.0):
            raise ValueError(f"cutoff_fraction must lie in (0, 1], got {self.cutoff_fraction}")
        if self.duration_override is not None and not (
            math.isfinite(self.duration_override) and self.duration_override > 0
        ):
            raise ValueError(f"duration_override must be > 0, got {self.duration_override}")

    @property
    def cutoff_time(self) -> float:
        return cutoff_time(self.shape, self.width, self.cutoff_fraction)

    @property
    def duration(self) -> float:
        """Total support length in ns (override wins over 2 t_c)."""
        if self.duration_override is not None:
            return self.duration_override
        return 2.0 * self.cutoff_time

    @property
    def edge_rabi(self) -> float:
        """Rabi frequency at the truncation edge, Omega_c = Omega(t_c)."""
        return self.peak_rabi * float(shape_value(self.shape, self.width, self.duration / 2.0))

    def rabi(self, t):
        """Omega(t) in rad/ns: peak_rabi * f(t) inside the support, 0 outside."""
        tt = np.asarray(t, dtype=float)
        half = self.duration / 2.0
        val = self.peak_rabi * shape_value(self.shape, self.width, tt)
        out = np.where(np.abs(tt) <= half, val, 0.0)
        return out if np.ndim(t) else float(out)


def pulse_area(spec: PulseSpec) -> float:
    """Pulse area in radians: peak_rabi * integral of f over the support.

    On resonance this is the Bloch-sphere rotation angle of the pulse.
    """
    half = spec.duration / 2.0
    return 2.0 * spec.peak_rabi * _envelope_half_integral(spec.shape, spec.width, half)


def amplitude_for_area(shape: ShapeFamily, width: float, cutoff_fraction: float,
                       area: float, duration_override: float | None = None) -> float:
    """Peak Rabi frequency giving the requested pulse area (radians).

    The area is linear in the amplitude, so this is a single division by the
    envelope integral over the support.
    """
    if not (math.isfinite(area) and area >= 0):
        raise ValueError(f"area must be >= 0, got {area}")
    probe = PulseSpec(shape, width, 0.0, cutoff_fraction, duration_override)
    integral = 2.0 * _envelope_half_integral(shape, width, probe.duration / 2.0)
    if integral <= 0.0:
        raise ValueError("pulse has zero support; cannot invert the area")
    return area / integral


# ---------------------------------------------------------------------------
# Discrete sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledPulse:
    """Zero-order-hold waveform: ``samples[k]`` is the Rabi frequency held on
    the cell [start_time + k dt, start_time + (k+1) dt) in midpoint mode, or
    the node value at start_time + k dt in node mode."""

    dt: float
    samples: np.ndarray
    start_time: float
    midpoint: bool = True

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("samples must be a non-empty 1-d array")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("samples must be finite and >= 0")
        object.__setattr__(self, "samples", arr)

    @property
    def duration(self) -> float:
        ncells = self.samples.size if self.midpoint else self.samples.size - 1
        return max(ncells, 1) * self.dt

    def times(self) -> np.ndarray:
        k = np.arange(self.samples.size)
        offset = 0.5 if self.midpoint else 0.0
        return self.start_time + (k + offset) * self.dt


def sample(spec: PulseSpec, dt: float, midpoint: bool = True) -> SampledPulse:
    """Sample the pulse on a uniform grid of interval ``dt``.

    Midpoint (hold) mode emits one sample per cell, evaluated at the cell
    center; node (interpolation) mode emits the envelope at the cell
    boundaries, one extra sample.  The sampled window is centered on the
    pulse and covers round(duration / dt) cells, so the covered length
    matches the support to within dt/2 per edge.
    """
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be > 0, got {dt}")
    duration = spec.duration
    if dt > duration:
        raise DegenerateSamplingError(
            f"dt = {dt} ns exceeds the pulse support of {duration} ns")
    ncells = max(1, round(duration / dt))
    start = -0.5 * ncells * dt
    if midpoint:
        t = start + (np.arange(ncells) + 0.5) * dt
    else:
        t = start + np.arange(ncells + 1) * dt
    values = spec.peak_rabi * shape_value(spec.shape, spec.width, t)
    return SampledPulse(dt=dt, samples=np.asarray(values, dtype=float),
                        start_time=start, midpoint=midpoint)


def hardware_sample(spec: PulseSpec, granularity: int = HARDWARE_GRANULARITY,
                    midpoint: bool = True) -> SampledPulse:
    """Sample on the hardware grid: dt = 2/9 ns, sample count snapped to the
    nearest multiple of ``granularity`` (waveform memories only accept such
    lengths; e.g. a nominal 601.8 ns Lorentzian support becomes 2704 samples
    = 600.89 ns)."""
    if granularity < 1:
        raise ValueError("granularity must be >= 1")
    duration = spec.duration
    ncells = int(math.floor(duration / HARDWARE_DT / granularity + 0.5)) * granularity
    ncells = max(ncells, granularity)
    start = -0.5 * ncells * HARDWARE_DT
    if midpoint:
        t = start + (np.arange(ncells) + 0.5) * HARDWARE_DT
    else:
        t = start + np.arange(ncells + 1) * HARDWARE_DT
    values = spec.peak_rabi * shape_value(spec.shape, spec.width, t)
    return SampledPulse(dt=HARDWARE_DT, samples=np.asarray(values, dtype=float),
                        start_time=start, midpoint=midpoint)
