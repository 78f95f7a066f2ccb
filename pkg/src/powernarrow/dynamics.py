"""Two-level Schrödinger propagation through a pulse at fixed detuning.

Conventions (rotating frame, rotating-wave approximation, real coupling,
hbar = 1, angular units):

    H(t) = 0.5 * [[-delta, Omega(t)], [Omega(t), delta]]

with delta = omega_qubit - omega_drive in rad/ns.  The system starts in the
ground state (c0, c1) = (1, 0) and the observable is the post-pulse
transition probability |c1|^2.

The integrator holds the Hamiltonian constant over each step and applies its
exact 2x2 exponential, so the evolution is unconditionally unitary and exact
for rectangular pulses.  For smooth shapes the step is halved until two
consecutive resolutions agree to ``tol`` (step-halving a.k.a. Richardson
probe).  Hardware mode instead pins the waveform to the 2/9 ns sample grid
and evolves that waveform exactly, with no refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernel import evolve_cells
from .errors import ResourceLimitError
from .pulse import (HARDWARE_DT, PulseSpec, Rectangular, hardware_sample,
                    sample, shape_value, SampledPulse)

#: Default refinement target for |p(dt) - p(dt/2)|.
DEFAULT_TOL = 1e-8

#: Hard cap on kernel steps per propagation pass.
DEFAULT_MAX_STEPS = 20_000_000


@dataclass(frozen=True)
class TwoLevelState:
    """Complex amplitude pair (c0, c1)."""

    c0: complex
    c1: complex

    @property
    def norm(self) -> float:
        return abs(self.c0) ** 2 + abs(self.c1) ** 2

    @property
    def p_excite(self) -> float:
        return abs(self.c1) ** 2


@dataclass(frozen=True)
class PropagationResult:
    p_excite: float
    final_state: TwoLevelState
    step_count: int
    est_error: float


def _default_dt(spec: PulseSpec) -> float:
    return min(HARDWARE_DT, spec.width / 200.0)


def _envelope_exact(spec: PulseSpec, dt_request: float, max_steps: int):
    """Midpoint envelope samples on a grid fitted exactly to the support.

    The step is shrunk to duration/ceil(duration/dt) so the covered window
    equals the support exactly; this keeps the hold error cleanly second
    order.  Rectangular pulses collapse to a single cell (the hold is exact).
    """
    duration = spec.duration
    if isinstance(spec.shape, Rectangular) and spec.duration_override is None:
        return np.ones(1), duration
    ncells = max(1, math.ceil(duration / dt_request))
    if ncells > max_steps:
        raise ResourceLimitError(
            f"propagation would need {ncells} steps (cap {max_steps})")
    h = duration / ncells
    t = -0.5 * duration + (np.arange(ncells) + 0.5) * h
    return np.asarray(shape_value(spec.shape, spec.width, t), dtype=float), h


def _run_pass(spec: PulseSpec, deltas: np.ndarray, dt_request: float, max_steps: int):
    envelope, h = _envelope_exact(spec, dt_request, max_steps)
    amps = evolve_cells(envelope, h, np.full(deltas.shape, spec.peak_rabi), deltas)
    return amps, envelope.size


def transition_amplitudes(spec: PulseSpec, deltas, dt: float | None = None,
                          tol: float | None = DEFAULT_TOL,
                          max_steps: int = DEFAULT_MAX_STEPS):
    """Final (c0, c1) for a batch of detunings, plus error estimate.

    Returns ``(amps, est_error, steps)`` where ``amps`` is complex with shape
    (2, len(deltas)) and ``est_error`` holds per-detuning |p(dt) - p(dt/2)|
    from the last refinement level (zeros when ``tol`` is None, which runs a
    single pass at the requested step).
    """
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    if not np.all(np.isfinite(deltas)):
        raise ValueError("detunings must be finite")
    dt_req = dt if dt is not None else _default_dt(spec)
    amps, steps = _run_pass(spec, deltas, dt_req, max_steps)
    if tol is None:
        return amps, np.zeros(deltas.shape), steps
    p_prev = np.abs(amps[1]) ** 2
    while True:
        dt_req *= 0.5
        amps, steps = _run_pass(spec, deltas, dt_req, max_steps)
        p_new = np.abs(amps[1]) ** 2
        est = np.abs(p_new - p_prev)
        if np.max(est) < tol:
            return amps, est, steps
        p_prev = p_new


def transition_probabilities(spec: PulseSpec, deltas, dt: float | None = None,
                             tol: float | None = DEFAULT_TOL,
                             max_steps: int = DEFAULT_MAX_STEPS,
                             shots: int | None = None, seed: int | None = None):
    """Post-pulse transition probabilities over a detuning grid.

    With ``shots`` set, each probability is replaced by the mean of that many
    Bernoulli draws from a seeded generator (hardware-style shot averaging;
    the platform default is 1024 shots per point).
    """
    amps, est, _ = transition_amplitudes(spec, deltas, dt=dt, tol=tol, max_steps=max_steps)
    p = np.abs(amps[1]) ** 2
    if shots is not None:
        rng = np.random.default_rng(seed)
        p = rng.binomial(shots, np.clip(p, 0.0, 1.0)) / shots
    return p, est


def propagate(spec: PulseSpec, delta: float, dt: float | None = None,
              hardware: bool = False, tol: float | None = DEFAULT_TOL,
              max_steps: int = DEFAULT_MAX_STEPS,
              shots: int | None = None, seed: int | None = None) -> PropagationResult:
    """Propagate through the pulse at a fixed detuning (rad/ns).

    In hardware mode the pulse is first discretized onto the 2/9 ns grid
    (sample count snapped to the waveform granularity) and that staircase is
    evolved exactly; est_error is 0 because the staircase itself is the model.
    """
    if not math.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta}")
    if hardware:
        waveform = hardware_sample(spec)
        return propagate_sampled(waveform, delta, shots=shots, seed=seed)
    amps, est, steps = transition_amplitudes(spec, [delta], dt=dt, tol=tol, max_steps=max_steps)
    state = TwoLevelState(complex(amps[0, 0]), complex(amps[1, 0]))
    p = state.p_excite
    if shots is not None:
        rng = np.random.default_rng(seed)
        p = float(rng.binomial(shots, min(max(p, 0.0), 1.0)) / shots)
    return PropagationResult(p_excite=p, final_state=state,
                             step_count=steps, est_error=float(est[0]))


def propagate_sampled(waveform: SampledPulse, delta: float,
                      shots: int | None = None, seed: int | None = None) -> PropagationResult:
    """Evolve an explicit zero-order-hold waveform exactly (one unitary per cell)."""
    if not math.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta}")
    env = waveform.samples if waveform.midpoint else waveform.samples[:-1]
    amps = evolve_cells(np.asarray(env, dtype=float), waveform.dt,
                        np.ones(1), np.array([float(delta)]))
    state = TwoLevelState(complex(amps[0, 0]), complex(amps[1, 0]))
    p = state.p_excite
    if shots is not None:
        rng = np.random.default_rng(seed)
        p = float(rng.binomial(shots, min(max(p, 0.0), 1.0)) / shots)
    return PropagationResult(p_excite=p, final_state=state,
                             step_count=env.size, est_error=0.0)


def population_trajectory(spec: PulseSpec, delta: float, dt: float | None = None):
    """Times and excited-state populations along the pulse (exploration aid).

    Uses the same held-Hamiltonian stepping as ``propagate`` at a fixed step;
    no refinement is applied.
    """
    dt_req = dt if dt is not None else _default_dt(spec)
    duration = spec.duration
    ncells = max(1, math.ceil(duration / dt_req))
    h = duration / ncells
    t = -0.5 * duration + (np.arange(ncells) + 0.5) * h
    env = np.asarray(shape_value(spec.shape, spec.width, t), dtype=float)
    c = np.array([1.0 + 0.0j, 0.0j])
    pops = np.empty(ncells + 1)
    pops[0] = 0.0
    for k in range(ncells):
        w = spec.peak_rabi * env[k]
        eps = math.hypot(w, delta)
        theta = eps * h / 2.0
        a = math.sin(theta) / eps if eps > 0.0 else h / 2.0
        u00 = math.cos(theta) + 1j * a * delta
        u01 = -1j * a * w
        c = np.array([u00 * c[0] + u01 * c[1], u01 * c[0] + np.conj(u00) * c[1]])
        pops[k + 1] = abs(c[1]) ** 2
    edges = np.concatenate([[-0.5 * duration], t + 0.5 * h])
    return edges, pops


# ---------------------------------------------------------------------------
# Closed-form oracles
# ---------------------------------------------------------------------------

def rabi_rect_oracle(peak_rabi: float, delta: float, duration: float) -> float:
    """Exact flat-pulse transition probability (generalized Rabi formula):

        P = Omega^2/(Omega^2 + Delta^2) * sin^2(sqrt(Omega^2 + Delta^2) * D / 2)
    """
    if duration < 0:
        raise ValueError("duration must be >= 0")
    w2 = peak_rabi * peak_rabi
    g2 = w2 + delta * delta
    if g2 == 0.0:
        return 0.0
    return (w2 / g2) * math.sin(math.sqrt(g2) * duration / 2.0) ** 2


def rosen_zener_oracle(peak_rabi: float, width: float, delta: float) -> float:
    """Exact untruncated sech-pulse transition probability:

        P = sin^2(pi Omega0 T / 2) * sech^2(pi Delta T / 2)

    The width-independence of the sech^2 factor's shape is the zero power
    broadening benchmark: the profile width never depends on Omega0.
    """
    if width <= 0:
        raise ValueError("width must be > 0")
    return (math.sin(math.pi * peak_rabi * width / 2.0) ** 2
            / math.cosh(math.pi * delta * width / 2.0) ** 2)


def convergence_probe(spec: PulseSpec, delta: float, dt: float) -> float:
    """|p(dt) - p(dt/2)|: the step-convergence estimate used by the
    auto-refinement loop."""
    deltas = np.array([float(delta)])
    amps1, _ = _run_pass(spec, deltas, dt, DEFAULT_MAX_STEPS)
    amps2, _ = _run_pass(spec, deltas, dt / 2.0, DEFAULT_MAX_STEPS)
    return float(abs(np.abs(amps1[1, 0]) ** 2 - np.abs(amps2[1, 0]) ** 2))
