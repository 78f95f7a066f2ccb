import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powernarrow.errors import DegenerateSamplingError, UnsupportedShapeError
from powernarrow.pulse import (HARDWARE_DT, Gaussian, LorentzianPower, PulseSpec,
                               Rectangular, Sech, amplitude_for_area, cutoff_time,
                               hardware_sample, pulse_area, sample,
                               shape_derivative, shape_value)

SMOOTH_SHAPES = [LorentzianPower(1.0), LorentzianPower(0.75), LorentzianPower(2.0),
                 Sech(), Gaussian()]
ALL_SHAPES = SMOOTH_SHAPES + [Rectangular()]

shape_strategy = st.sampled_from(ALL_SHAPES)
smooth_strategy = st.sampled_from(SMOOTH_SHAPES)


class TestShapeValue:
    def test_lorentzian_peak_normalized(self):
        assert shape_value(LorentzianPower(1.0), 1.0, 0.0) == 1.0

    def test_lorentzian_algebra(self):
        assert shape_value(LorentzianPower(1.0), 1.0, 1.0) == pytest.approx(0.5, abs=1e-15)
        assert shape_value(LorentzianPower(2.0), 1.0, 1.0) == pytest.approx(0.25, abs=1e-15)

    def test_sech_peak(self):
        assert shape_value(Sech(), 1.0, 0.0) == 1.0

    def test_gaussian(self):
        assert shape_value(Gaussian(), 2.0, 2.0) == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_rectangular_support(self):
        f = shape_value(Rectangular(), 1.0, np.array([-1.5, -1.0, 0.0, 1.0, 1.5]))
        assert f.tolist() == [0.0, 1.0, 1.0, 1.0, 0.0]

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            shape_value(Sech(), 1.0, math.nan)
        with pytest.raises(ValueError):
            shape_value(Sech(), math.inf, 0.0)

    def test_rejects_bad_power(self):
        with pytest.raises(ValueError):
            LorentzianPower(0.5)
        with pytest.raises(ValueError):
            LorentzianPower(0.2)

    @settings(max_examples=50, deadline=None)
    @given(shape_strategy, st.floats(0.1, 50.0), st.floats(-1e3, 1e3))
    def test_even_exactly(self, shape, width, t):
        assert shape_value(shape, width, t) == shape_value(shape, width, -t)

    def test_lorentzian_tail_strictly_decreasing(self):
        t = np.linspace(0.0, 500.0, 20000)
        for n in (0.6, 1.0, 2.0):
            f = shape_value(LorentzianPower(n), 2.0, t)
            assert np.all(np.diff(f) < 0)


class TestShapeDerivative:
    def test_zero_at_origin(self):
        for shape in SMOOTH_SHAPES:
            assert shape_derivative(shape, 1.7, 0.0) == 0.0

    def test_lorentzian_value(self):
        assert shape_derivative(LorentzianPower(1.0), 1.0, 1.0) == pytest.approx(-0.5, rel=1e-14)

    def test_gaussian_value(self):
        # frozen from -(1/2) e^(-1/2), cross-checked by finite difference below
        assert shape_derivative(Gaussian(), 2.0, 2.0) == pytest.approx(-0.3032653298563167, rel=1e-12)

    def test_rectangular_rejected(self):
        with pytest.raises(UnsupportedShapeError):
            shape_derivative(Rectangular(), 1.0, 0.5)

    @settings(max_examples=100, deadline=None)
    @given(smooth_strategy, st.floats(-8.0, 8.0))
    def test_matches_finite_difference(self, shape, x):
        width = 2.5
        t = x * width
        h = 1e-6 * width
        fd = (shape_value(shape, width, t + h) - shape_value(shape, width, t - h)) / (2 * h)
        an = shape_derivative(shape, width, t)
        assert an == pytest.approx(fd, rel=1e-5, abs=1e-9 / width)

    @settings(max_examples=50, deadline=None)
    @given(smooth_strategy, st.floats(0.01, 100.0))
    def test_odd(self, shape, t):
        assert shape_derivative(shape, 3.0, t) == -shape_derivative(shape, 3.0, -t)


class TestCutoffTime:
    def test_lorentzian_half(self):
        assert cutoff_time(LorentzianPower(1.0), 1.0, 0.5) == pytest.approx(1.0, rel=1e-14)

    def test_lorentzian_two_percent(self):
        assert cutoff_time(LorentzianPower(1.0), 1.0, 0.02) == pytest.approx(7.0, rel=1e-14)

    def test_paper_durations(self):
        # 50% cut of a 21.33 ns Lorentzian lasts 2T = 42.66 ns
        tc = cutoff_time(LorentzianPower(1.0), 21.33, 0.5)
        assert 2 * tc == pytest.approx(42.66, abs=0.02)
        # 0.5% cut: t_c ~ 300.9 ns, nominal duration ~ 601.8 ns
        tc = cutoff_time(LorentzianPower(1.0), 21.33, 0.005)
        assert tc == pytest.approx(300.9, abs=0.1)

    def test_rectangular_ignores_fraction(self):
        assert cutoff_time(Rectangular(), 3.0, 0.5) == 3.0
        assert cutoff_time(Rectangular(), 3.0, 1e-6) == 3.0

    def test_rejects_bad_fraction(self):
        for eps in (0.0, -0.1, 1.5, math.nan):
            with pytest.raises(ValueError):
                cutoff_time(Sech(), 1.0, eps)

    @settings(max_examples=60, deadline=None)
    @given(smooth_strategy, st.floats(0.2, 30.0),
           st.floats(1e-9, 1.0, exclude_max=False))
    def test_cut_consistency(self, shape, width, eps):
        tc = cutoff_time(shape, width, eps)
        assert shape_value(shape, width, tc) == pytest.approx(eps, rel=1e-10)


class TestPulseArea:
    def test_rectangular_pi(self):
        spec = PulseSpec(Rectangular(), 1.0, math.pi / 2, 1.0)
        assert pulse_area(spec) == pytest.approx(math.pi, rel=1e-12)

    def test_lorentzian_untruncated_limit(self):
        # full integral of 1/(1+x^2) is pi; at eps=1e-9 the missing tail is
        # 2/t_c ~ 6.3e-5
        spec = PulseSpec(LorentzianPower(1.0), 1.0, 1.0, 1e-9)
        assert pulse_area(spec) == pytest.approx(math.pi, abs=1e-4)
        assert pulse_area(spec) == pytest.approx(2 * math.atan(spec.cutoff_time), rel=1e-10)

    def test_lorentzian_half_cut(self):
        spec = PulseSpec(LorentzianPower(1.0), 1.0, 1.0, 0.5)
        assert pulse_area(spec) == pytest.approx(math.pi / 2, rel=1e-12)

    def test_slow_tail_regime(self):
        # n near 1/2 with support ~3e7 widths; value frozen from a 30-digit
        # mpmath quadrature of the same integral
        spec = PulseSpec(LorentzianPower(0.6), 1.0, 1.0, 1e-9)
        assert pulse_area(spec) == pytest.approx(2 * 5.50342960459945788694, rel=1e-9)

    def test_area_monotone_in_truncation(self):
        areas = [pulse_area(PulseSpec(Sech(), 2.0, 1.0, eps))
                 for eps in (0.5, 0.1, 0.01, 1e-4, 1e-8)]
        assert all(a < b for a, b in zip(areas, areas[1:]))

    def test_amplitude_for_area_examples(self):
        assert amplitude_for_area(Rectangular(), 1.0, 1.0, math.pi) == pytest.approx(math.pi / 2, rel=1e-12)
        assert amplitude_for_area(LorentzianPower(1.0), 1.0, 0.5, math.pi) == pytest.approx(2.0, rel=1e-12)

    def test_zero_support_rejected(self):
        with pytest.raises(ValueError):
            amplitude_for_area(Sech(), 1.0, 1.0, math.pi)  # eps=1 cuts at the peak

    @settings(max_examples=50, deadline=None)
    @given(smooth_strategy, st.floats(0.5, 30.0), st.floats(1e-4, 0.9),
           st.floats(0.1, 30.0))
    def test_area_roundtrip(self, shape, width, eps, area):
        w0 = amplitude_for_area(shape, width, eps, area)
        assert pulse_area(PulseSpec(shape, width, w0, eps)) == pytest.approx(area, rel=1e-9)


class TestSampling:
    def test_rectangular_hold(self):
        spec = PulseSpec(Rectangular(), 1.0, 1.0, 1.0)
        wf = sample(spec, 0.5)
        assert wf.samples.size == 4
        assert np.all(wf.samples == 1.0)
        assert wf.duration == pytest.approx(2.0)

    def test_node_mode_has_extra_sample(self):
        spec = PulseSpec(Gaussian(), 1.0, 1.0, 0.01)
        hold = sample(spec, 0.25)
        nodes = sample(spec, 0.25, midpoint=False)
        assert nodes.samples.size == hold.samples.size + 1
        assert abs(hold.samples.size * 0.25 - spec.duration) <= 0.25

    def test_hardware_grid_count(self):
        # 600.89 ns on the 2/9 ns grid with granularity 16 -> 2704 samples
        spec = PulseSpec(LorentzianPower(1.0), 21.33, 0.3, 0.005)
        wf = hardware_sample(spec)
        assert abs(wf.samples.size - 2704) <= 1
        assert wf.samples.size % 16 == 0
        assert wf.dt == HARDWARE_DT
        assert wf.duration == pytest.approx(600.89, abs=0.05)

    def test_hardware_grid_short_pulse(self):
        # the 50%-cut pulse: 42.66 ns nominal -> 192 samples = 42.67 ns
        spec = PulseSpec(LorentzianPower(1.0), 21.33, 0.3, 0.5)
        wf = hardware_sample(spec)
        assert wf.samples.size == 192

    def test_degenerate_dt_rejected(self):
        spec = PulseSpec(Sech(), 1.0, 1.0, 0.5)
        with pytest.raises(DegenerateSamplingError):
            sample(spec, 100.0)

    def test_midpoint_area_second_order(self):
        # halving the step cuts the quadrature error ~4x once the grid
        # divides the support exactly (frozen Richardson measurement)
        spec = PulseSpec(Gaussian(), 3.0, 1.0, 1e-6)
        duration = spec.duration
        exact = pulse_area(spec)

        def area_err(dt):
            wf = sample(spec, dt)
            return abs(float(np.sum(wf.samples)) * wf.dt - exact)

        ratio = area_err(duration / 64) / area_err(duration / 128)
        assert 3.2 <= ratio <= 4.8

    def test_sample_values_match_envelope(self):
        spec = PulseSpec(Sech(), 2.0, 1.3, 0.05)
        wf = sample(spec, 0.1)
        expect = 1.3 * shape_value(Sech(), 2.0, wf.times())
        assert np.allclose(wf.samples, expect, rtol=0, atol=0)


class TestPulseSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            PulseSpec(Sech(), -1.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            PulseSpec(Sech(), 1.0, -1.0, 0.5)
        with pytest.raises(ValueError):
            PulseSpec(Sech(), 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            PulseSpec(Sech(), 1.0, 1.0, 1.2)

    def test_duration_override(self):
        spec = PulseSpec(LorentzianPower(1.0), 1.0, 1.0, 0.5, duration_override=1.5)
        assert spec.duration == 1.5
        assert spec.rabi(0.74) > 0
        assert spec.rabi(0.76) == 0.0

    def test_edge_rabi(self):
        spec = PulseSpec(LorentzianPower(1.0), 1.0, 2.0, 0.02)
        assert spec.edge_rabi == pytest.approx(0.04, rel=1e-12)

    def test_rabi_outside_support_is_zero(self):
        spec = PulseSpec(Sech(), 1.0, 1.0, 0.1)
        half = spec.duration / 2
        assert spec.rabi(half + 1e-9) == 0.0
        assert spec.rabi(-half - 1e-9) == 0.0
        assert spec.rabi(0.0) == 1.0
