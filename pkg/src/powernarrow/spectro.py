"""Sweep engine and measurement layer: spectral profiles, excitation
landscapes, off-resonant Rabi slices, FWHM extraction, narrowing-exponent
fits, and the truncation crossover/residual studies.

Concurrency contract: the unit of work is always one profile (one pulse spec
swept over a full detuning grid, refined as a unit).  Worker pools only
distribute whole units, and each unit's computation is independent of every
other, so results are bit-identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import DEFAULT_TOL, transition_probabilities
from .errors import InconclusiveError, ResourceLimitError
from .pulse import PulseSpec, ShapeFamily, amplitude_for_area
from . import pulse as _pulse

#: Upper bound on landscape cells unless the caller raises it.
DEFAULT_CELL_BUDGET = 250_000

#: Resonant-peak areas examined by the truncation crossover study (units of pi).
PEAK_AREAS_PI = (1, 3, 5, 7, 9)


# ---------------------------------------------------------------------------
# Result containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralProfile:
    """One horizontal cut of a landscape: P(delta) at fixed pulse."""

    detunings: np.ndarray
    probabilities: np.ndarray
    spec: PulseSpec
    area: float

    def __post_init__(self):
        d = np.asarray(self.detunings, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if d.ndim != 1 or d.shape != p.shape:
            raise ValueError("detunings and probabilities must be 1-d and equal length")
        if not np.all(np.diff(d) > 0):
            raise ValueError("detunings must be strictly increasing")
        object.__setattr__(self, "detunings", d)
        object.__setattr__(self, "probabilities", p)


@dataclass(frozen=True)
class Landscape:
    """P over the (peak_rabi, detuning) grid; matrix indexed [rabi][detuning]."""

    detunings: np.ndarray
    rabi_amplitudes: np.ndarray
    probabilities: np.ndarray
    spec_template: PulseSpec

    def __post_init__(self):
        d = np.asarray(self.detunings, dtype=float)
        r = np.asarray(self.rabi_amplitudes, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if p.shape != (r.size, d.size):
            raise ValueError(f"matrix shape {p.shape} != (rabi, detuning) = ({r.size}, {d.size})")
        object.__setattr__(self, "detunings", d)
        object.__setattr__(self, "rabi_amplitudes", r)
        object.__setattr__(self, "probabilities", p)


@dataclass(frozen=True)
class FwhmResult:
    peak_detuning: float
    peak_probability: float
    left_cross: float
    right_cross: float

    @property
    def fwhm(self) -> float:
        return self.right_cross - self.left_cross


@dataclass(frozen=True)
class ScalingFit:
    """Log-log fit of width vs amplitude; ``exponent`` is the narrowing
    exponent nu (positive for narrowing, negative for broadening)."""

    exponent: float
    intercept: float
    r_squared: float
    points_used: int


@dataclass(frozen=True)
class CutoffStudyEntry:
    cutoff_fraction: float
    landscape: Landscape
    peak_widths: tuple  # of (area_in_pi, FwhmResult)


@dataclass(frozen=True)
class TruncationResidual:
    """Crest envelope of the truncated-minus-reference excitation excess."""

    slope: float
    intercept: float
    crest_detunings: np.ndarray
    crest_excess: np.ndarray

    def envelope_at(self, delta: float) -> float:
        """Fitted envelope value C * delta^slope."""
        return math.exp(self.intercept + self.slope * math.log(delta))


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _resolve_workers(workers):
    if workers is None:
        return os.cpu_count() or 1
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return int(workers)


def _map_ordered(fn, items, workers):
    """Order-preserving map over whole work units."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def spectral_profile(spec: PulseSpec, detunings, tol: float | None = DEFAULT_TOL,
                     shots: int | None = None, seed: int | None = None) -> SpectralProfile:
    """Element-wise propagation over a sorted detuning grid (rad/ns)."""
    d = np.asarray(detunings, dtype=float)
    if d.size == 0:
        raise ValueError("detuning grid is empty")
    p, _ = transition_probabilities(spec, d, tol=tol, shots=shots, seed=seed)
    return SpectralProfile(detunings=d, probabilities=p, spec=spec,
                           area=_pulse.pulse_area(spec))


def excitation_landscape(shape: ShapeFamily, width: float, cutoff_fraction: float,
                         rabi_amplitudes, detunings, workers: int | None = None,
                         tol: float | None = DEFAULT_TOL,
                         cell_budget: int = DEFAULT_CELL_BUDGET,
                         shots: int | None = None, seed: int | None = None) -> Landscape:
    """Full matrix of propagations over the (peak_rabi, detuning) grid.

    Rows (fixed amplitude) are independent work units; each row auto-refines
    its own step until the row's probabilities are converged to ``tol``.
    """
    r = np.asarray(rabi_amplitudes, dtype=float)
    d = np.asarray(detunings, dtype=float)
    if r.size == 0 or d.size == 0:
        raise ValueError("grids must be non-empty")
    if r.size * d.size > cell_budget:
        raise ResourceLimitError(
            f"landscape of {r.size}x{d.size} cells exceeds budget {cell_budget}")
    nworkers = _resolve_workers(workers)

    def row(i):
        spec = PulseSpec(shape, width, float(r[i]), cutoff_fraction)
        row_seed = None if seed is None else [seed, i]
        p, _ = transition_probabilities(spec, d, tol=tol, shots=shots, seed=row_seed)
        return p

    rows = _map_ordered(row, range(r.size), nworkers)
    template = PulseSpec(shape, width, float(r[0]), cutoff_fraction)
    return Landscape(detunings=d, rabi_amplitudes=r,
                     probabilities=np.vstack(rows), spec_template=template)


def rabi_slice(shape: ShapeFamily, width: float, cutoff_fraction: float,
               delta: float, rabi_amplitudes, workers: int | None = None,
               tol: float | None = DEFAULT_TOL,
               shots: int | None = None, seed: int | None = None) -> np.ndarray:
    """Vertical slice of the landscape: P vs peak amplitude at fixed detuning."""
    r = np.asarray(rabi_amplitudes, dtype=float)
    if r.size == 0:
        raise ValueError("amplitude grid is empty")
    nworkers = _resolve_workers(workers)

    def one(i):
        spec = PulseSpec(shape, width, float(r[i]), cutoff_fraction)
        row_seed = None if seed is None else [seed, i]
        p, _ = transition_probabilities(spec, [delta], tol=tol, shots=shots, seed=row_seed)
        return float(p[0])

    return np.asarray(_map_ordered(one, range(r.size), nworkers))


# ---------------------------------------------------------------------------
# Width extraction and fits
# ---------------------------------------------------------------------------

def fwhm(profile: SpectralProfile) -> FwhmResult:
    """Central-lobe full width at half of the profile's own maximum.

    Walks outward from the global maximum to the first samples below
    half-maximum on each side and interpolates the crossings linearly;
    sidelobes beyond the first crossing are ignored.  Raises
    InconclusiveError when the peak sits on the grid boundary or a crossing
    is never reached (grid too narrow).
    """
    d = profile.detunings
    p = profile.probabilities
    i = int(np.argmax(p))
    if p[i] <= 0.0:
        raise InconclusiveError("profile has no positive maximum")
    if i == 0 or i == p.size - 1:
        raise InconclusiveError("profile maximum sits on the grid boundary")
    half = p[i] / 2.0

    j = i
    while j + 1 < p.size and p[j + 1] >= half:
        j += 1
    if j + 1 >= p.size:
        raise InconclusiveError("no right half-maximum crossing inside the grid")
    right = d[j] + (d[j + 1] - d[j]) * (half - p[j]) / (p[j + 1] - p[j])

    j = i
    while j - 1 >= 0 and p[j - 1] >= half:
        j -= 1
    if j - 1 < 0:
        raise InconclusiveError("no left half-maximum crossing inside the grid")
    left = d[j] + (d[j - 1] - d[j]) * (half - p[j]) / (p[j - 1] - p[j])

    return FwhmResult(peak_detuning=float(d[i]), peak_probability=float(p[i]),
                      left_cross=float(left), right_cross=float(right))


def fit_scaling(points) -> ScalingFit:
    """Least-squares line through (log amplitude, log width); the narrowing
    exponent is minus the slope."""
    pts = [(float(a), float(w)) for a, w in points]
    if len(pts) < 3:
        raise ValueError("scaling fit needs at least 3 points")
    if any(a <= 0 or w <= 0 for a, w in pts):
        raise ValueError("scaling fit needs positive amplitudes and widths")
    x = np.log([a for a, _ in pts])
    y = np.log([w for _, w in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return ScalingFit(exponent=float(-slope), intercept=float(intercept),
                      r_squared=r2, points_used=len(pts))


def profile_for_area(shape: ShapeFamily, width: float, cutoff_fraction: float,
                     area: float, detunings, tol: float | None = DEFAULT_TOL) -> SpectralProfile:
    """Profile at the amplitude that realizes the given pulse area (radians)."""
    w0 = amplitude_for_area(shape, width, cutoff_fraction, area)
    return spectral_profile(PulseSpec(shape, width, w0, cutoff_fraction),
                            detunings, tol=tol)


def fwhm_for_area(shape: ShapeFamily, width: float, cutoff_fraction: float,
                  area: float, n_points: int = 161,
                  initial_halfspan: float | None = None,
                  tol: float | None = DEFAULT_TOL, max_zoom: int = 60):
    """FWHM of the profile at a given pulse area, on a self-adjusting grid.

    Widths across shapes/areas span orders of magnitude, so the detuning
    half-span is widened (x4) until a half-maximum crossing exists, then
    zoomed so the width covers about a quarter of the grid.  Returns
    (FwhmResult, SpectralProfile) from the final grid.
    """
    if n_points < 17:
        raise ValueError("n_points too small to resolve a width")
    halfspan = initial_halfspan if initial_halfspan is not None else 2.0 / width
    target_steps = max(12, (n_points - 1) // 4)
    for _ in range(max_zoom):
        grid = np.linspace(-halfspan, halfspan, n_points)
        profile = profile_for_area(shape, width, cutoff_fraction, area, grid, tol=tol)
        try:
            result = fwhm(profile)
        except InconclusiveError:
            halfspan *= 4.0
            continue
        step = grid[1] - grid[0]
        steps_covered = result.fwhm / step
        if steps_covered < 10 or steps_covered > 0.8 * (n_points - 1):
            halfspan = result.fwhm * (n_points - 1) / (2.0 * target_steps)
            continue
        return result, profile
    raise InconclusiveError(
        f"width search did not settle after {max_zoom} grid adjustments")


def scaling_study(shape: ShapeFamily, width: float, cutoff_fraction: float,
                  areas, n_points: int = 97, tol: float | None = DEFAULT_TOL):
    """(amplitude, width) points at the given areas plus their scaling fit.

    Grids warm-start from the previous area's width, which matters when the
    widths fall by orders of magnitude along the area list.
    """
    points = []
    halfspan = None
    for area in areas:
        w0 = amplitude_for_area(shape, width, cutoff_fraction, area)
        result, _ = fwhm_for_area(shape, width, cutoff_fraction, area,
                                  n_points=n_points, initial_halfspan=halfspan, tol=tol)
        points.append((w0, result.fwhm))
        halfspan = result.fwhm * 2.0
    return points, fit_scaling(points)


# ---------------------------------------------------------------------------
# Truncation studies
# ---------------------------------------------------------------------------

def cutoff_study(shape: ShapeFamily, width: float, cutoff_fractions,
                 rabi_amplitudes, detunings, workers: int | None = None,
                 tol: float | None = DEFAULT_TOL,
                 profile_points: int = 161,
                 cell_budget: int = DEFAULT_CELL_BUDGET):
    """One landscape per truncation level plus the FWHM of the profile
    through each resonant Rabi peak (areas pi, 3pi, ... 9pi) whose amplitude
    falls inside the amplitude grid.

    This is the broadening-to-narrowing crossover experiment: severe
    truncation power-broadens the high-area peaks, far truncation lets them
    power-narrow instead.
    """
    fractions = list(cutoff_fractions)
    if not fractions:
        raise ValueError("need at least one cutoff fraction")
    r = np.asarray(rabi_amplitudes, dtype=float)
    entries = []
    for eps in fractions:
        landscape = excitation_landscape(shape, width, eps, r, detunings,
                                         workers=workers, tol=tol, cell_budget=cell_budget)
        widths = []
        for k in PEAK_AREAS_PI:
            w0 = amplitude_for_area(shape, width, eps, k * math.pi)
            if w0 > r.max():
                continue
            result, _ = fwhm_for_area(shape, width, eps, k * math.pi,
                                      n_points=profile_points, tol=tol)
            widths.append((k, result))
        entries.append(CutoffStudyEntry(cutoff_fraction=float(eps), landscape=landscape,
                                        peak_widths=tuple(widths)))
    return entries


def truncation_residual(spec: PulseSpec, reference_cutoff: float,
                        window, n_points: int = 1200,
                        tol: float | None = 1e-7,
                        crest_floor: float = 1e-6) -> TruncationResidual:
    """Far-wing excess of the truncated pulse over a near-untruncated
    reference, reduced to its oscillation-crest envelope.

    The excess P(truncated) - P(reference) oscillates with the edge phase;
    the physics of the cut-off term lives in the crest envelope, which decays
    as Omega_c^2/delta^2 (log-log slope -2) far outside the ideal profile.

    Parameters
    ----------
    window : (delta_min, delta_max) in rad/ns, typically ~[10, 100] Omega_c.
    crest_floor : crests below this excess are noise and ignored; if fewer
        than 3 usable crests remain the measurement is inconclusive.
    """
    if not (0.0 < reference_cutoff <= 1.0):
        raise ValueError("reference_cutoff must lie in (0, 1]")
    lo, hi = float(window[0]), float(window[1])
    if not (0.0 < lo < hi):
        raise ValueError("window must satisfy 0 < lo < hi")
    d = np.geomspace(lo, hi, n_points)
    p_cut, _ = transition_probabilities(spec, d, tol=tol)
    ref_spec = PulseSpec(spec.shape, spec.width, spec.peak_rabi, reference_cutoff)
    p_ref, _ = transition_probabilities(ref_spec, d, tol=tol)
    excess = p_cut - p_ref
    inner = excess[1:-1]
    is_crest = (inner > excess[:-2]) & (inner >= excess[2:])
    idx = np.nonzero(is_crest)[0] + 1
    idx = idx[excess[idx] > crest_floor]
    if idx.size < 3:
        raise InconclusiveError(
            f"only {idx.size} usable oscillation crests above {crest_floor} in the window")
    x = np.log(d[idx])
    y = np.log(excess[idx])
    slope, intercept = np.polyfit(x, y, 1)
    return TruncationResidual(slope=float(slope), intercept=float(intercept),
                              crest_detunings=d[idx], crest_excess=excess[idx])


def truncation_residual_slope(spec: PulseSpec, reference_cutoff: float,
                              window, n_points: int = 1200,
                              tol: float | None = 1e-7) -> float:
    """Log-log slope of the far-wing excess envelope (contract: about -2)."""
    return truncation_residual(spec, reference_cutoff, window,
                               n_points=n_points, tol=tol).slope
