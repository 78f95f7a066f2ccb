import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powernarrow.dynamics import (convergence_probe, population_trajectory,
                                  propagate, propagate_sampled, rabi_rect_oracle,
                                  rosen_zener_oracle, transition_amplitudes,
                                  transition_probabilities)
from powernarrow.errors import ResourceLimitError
from powernarrow.pulse import (Gaussian, LorentzianPower, PulseSpec, Rectangular,
                               Sech, amplitude_for_area, hardware_sample, pulse_area)


class TestRectOracle:
    def test_resonant_pi(self):
        assert rabi_rect_oracle(math.pi, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_half_transfer(self):
        assert rabi_rect_oracle(1.0, 1.0, math.pi / math.sqrt(2)) == pytest.approx(0.5, rel=1e-12)

    def test_no_coupling(self):
        assert rabi_rect_oracle(0.0, 5.0, 7.0) == 0.0

    def test_propagate_matches(self):
        spec = PulseSpec(Rectangular(), 0.7, 2.3, 1.0)
        for delta in (0.0, 0.8, -3.2):
            res = propagate(spec, delta)
            assert res.p_excite == pytest.approx(rabi_rect_oracle(2.3, delta, 1.4), abs=1e-12)

    def test_resonant_pi_pulse_exact(self):
        spec = PulseSpec(Rectangular(), 0.5, math.pi, 1.0)
        assert propagate(spec, 0.0).p_excite == pytest.approx(1.0, abs=1e-10)

    def test_half_transfer_at_matched_detuning(self):
        # delta = Omega0 and sqrt(2) Omega0 D = pi gives P = 1/2
        w0 = 1.3
        dur = math.pi / (math.sqrt(2.0) * w0)
        spec = PulseSpec(Rectangular(), dur / 2, w0, 1.0)
        assert propagate(spec, w0).p_excite == pytest.approx(0.5, abs=1e-12)


class TestRosenZener:
    def test_resonant_pi(self):
        assert rosen_zener_oracle(1.0, 1.0, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_detuned_value(self):
        expect = 1.0 / math.cosh(math.pi / 2) ** 2
        assert rosen_zener_oracle(1.0, 1.0, 1.0) == pytest.approx(expect, rel=1e-14)
        assert expect == pytest.approx(0.15883, abs=1e-5)

    def test_two_pi_pulse_transparent(self):
        for delta in (0.0, 0.3, 2.0):
            assert rosen_zener_oracle(2.0, 1.0, delta) == pytest.approx(0.0, abs=1e-25)

    def test_propagate_matches(self):
        width = 1.0
        spec = PulseSpec(Sech(), width, 1.0 / width, 1e-6)  # area pi
        res = propagate(spec, 1.0 / width)
        assert res.p_excite == pytest.approx(rosen_zener_oracle(1.0, width, 1.0), abs=1e-4)


class TestPropagation:
    def test_area_theorem_on_resonance(self):
        for shape in (LorentzianPower(1.0), LorentzianPower(0.75), Sech(), Gaussian()):
            w0 = amplitude_for_area(shape, 2.0, 0.01, 2.3 * math.pi)
            spec = PulseSpec(shape, 2.0, w0, 0.01)
            expect = math.sin(pulse_area(spec) / 2.0) ** 2
            assert propagate(spec, 0.0).p_excite == pytest.approx(expect, abs=1e-8)

    def test_result_consistency(self):
        spec = PulseSpec(Sech(), 1.5, 0.9, 0.01)
        res = propagate(spec, 0.4)
        assert res.p_excite == pytest.approx(res.final_state.p_excite, abs=1e-15)
        assert res.final_state.norm == pytest.approx(1.0, abs=1e-12)
        assert res.est_error < 1e-8

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([LorentzianPower(1.0), LorentzianPower(0.8), Sech(), Gaussian()]),
           st.floats(0.5, 10.0), st.floats(0.02, 0.8), st.floats(0.1, 8.0),
           st.floats(0.01, 4.0))
    def test_unitary_and_symmetric(self, shape, width, eps, area_pi, delta_scaled):
        w0 = amplitude_for_area(shape, width, eps, area_pi * math.pi)
        spec = PulseSpec(shape, width, w0, eps)
        delta = delta_scaled / width
        amps, _, _ = transition_amplitudes(spec, [delta, -delta], tol=None)
        norms = np.abs(amps[0]) ** 2 + np.abs(amps[1]) ** 2
        assert np.max(np.abs(norms - 1.0)) < 1e-10
        p = np.abs(amps[1]) ** 2
        assert abs(p[0] - p[1]) < 1e-10

    def test_step_cap_raises(self):
        spec = PulseSpec(LorentzianPower(0.6), 1.0, 0.5, 1e-9)
        with pytest.raises(ResourceLimitError):
            propagate(spec, 0.1, max_steps=10_000)

    def test_shot_noise(self):
        spec = PulseSpec(Sech(), 1.0, 0.5, 0.01)
        noisy1 = propagate(spec, 0.3, shots=1024, seed=42)
        noisy2 = propagate(spec, 0.3, shots=1024, seed=42)
        clean = propagate(spec, 0.3)
        assert noisy1.p_excite == noisy2.p_excite  # seeded
        assert noisy1.p_excite == pytest.approx(clean.p_excite, abs=0.06)
        assert (noisy1.p_excite * 1024) == pytest.approx(round(noisy1.p_excite * 1024))

    def test_trajectory_endpoints(self):
        spec = PulseSpec(Gaussian(), 1.0, 1.2, 0.01)
        times, pops = population_trajectory(spec, 0.5, dt=0.01)
        assert pops[0] == 0.0
        assert times[0] == pytest.approx(-spec.duration / 2)
        assert pops[-1] == pytest.approx(propagate(spec, 0.5).p_excite, abs=1e-4)


class TestConvergenceProbe:
    def test_rectangular_exact_for_any_step(self):
        spec = PulseSpec(Rectangular(), 1.0, 1.7, 1.0)
        for dt in (0.5, 0.11, 0.037):
            assert convergence_probe(spec, 0.9, dt) < 1e-13

    def test_second_order_ratio(self):
        # hold error is O(dt^2): the probe shrinks ~4x per halving (frozen
        # from a Richardson sweep; band allows higher-order contamination)
        spec = PulseSpec(Gaussian(), 2.0, amplitude_for_area(Gaussian(), 2.0, 1e-6, 2 * math.pi), 1e-6)
        dt = 2.0 / 25.0
        r1 = convergence_probe(spec, 0.7, dt)
        r2 = convergence_probe(spec, 0.7, dt / 2)
        assert 3.0 <= r1 / r2 <= 5.0

    def test_smooth_monotone_decay(self):
        spec = PulseSpec(LorentzianPower(1.0), 1.0, 1.1, 0.01)
        probes = [convergence_probe(spec, 0.8, dt) for dt in (0.08, 0.04, 0.02, 0.01)]
        assert all(a > b for a, b in zip(probes, probes[1:]))
        assert probes[-1] < probes[0] / 16


class TestHardwareMode:
    def test_pins_sample_grid(self):
        spec = PulseSpec(LorentzianPower(1.0), 21.33, 0.05, 0.005)
        res = propagate(spec, 0.1, hardware=True)
        assert res.step_count == 2704
        assert res.est_error == 0.0

    def test_matches_continuous_at_the_percent_level(self):
        spec = PulseSpec(LorentzianPower(1.0), 24.89,
                         amplitude_for_area(LorentzianPower(1.0), 24.89, 0.005, math.pi),
                         0.005)
        for delta in (0.0, 0.02, 0.05):
            hw = propagate(spec, delta, hardware=True).p_excite
            ct = propagate(spec, delta).p_excite
            assert hw == pytest.approx(ct, abs=1e-3)

    def test_sampled_waveform_roundtrip(self):
        spec = PulseSpec(Sech(), 3.0, 0.4, 0.01)
        wf = hardware_sample(spec)
        direct = propagate_sampled(wf, 0.2)
        via_flag = propagate(spec, 0.2, hardware=True)
        assert direct.p_excite == via_flag.p_excite

    def test_batch_matches_scalar(self):
        # refinement is per batch, so scalar calls may stop at a different
        # depth; both sides still agree to the refinement tolerance
        spec = PulseSpec(Gaussian(), 1.0, 0.9, 0.03)
        deltas = np.array([-0.4, 0.0, 1.3])
        p, est = transition_probabilities(spec, deltas)
        for d, expect in zip(deltas, p):
            assert propagate(spec, float(d)).p_excite == pytest.approx(expect, abs=1e-8)
        assert np.all(est < 1e-8)
