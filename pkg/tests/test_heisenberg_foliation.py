import math

import pytest

from adialab.errors import ParameterError
from adialab.golden import heisenberg_reduced_oracle
from adialab.numerics import adaptive_quad
from foliations.heisenberg_foliation import (
    SERIES_CUTOFF,
    HeisenbergParams,
    MehlerParams,
    heisenberg_consistency_report,
    heisenberg_diagonal_kernel,
    heisenberg_symbol_trace_2d,
    heisenberg_symbol_trace_reduced,
    heisenberg_trace_prediction,
    heisenberg_trace_rhs,
    mehler_diagonal_trace,
    mehler_kernel,
    oscillator_heat_trace,
    tanh_over_x,
    x_over_sinh,
    x_over_tanh,
)
from tests.utils import TIGHT_SPEC, assert_close


def textbook_mehler(omega: float, t: float, x: float, y: float) -> float:
    s = math.sinh(2.0 * omega * t)
    c = math.cosh(2.0 * omega * t)
    return math.sqrt(omega / (2.0 * math.pi * s)) * math.exp(-omega * ((x * x + y * y) * c - 2.0 * x * y) / (2.0 * s))


class TestSeries:
    def test_continuous_at_cutoff(self):
        below = SERIES_CUTOFF * (1.0 - 1e-9)
        above = SERIES_CUTOFF * (1.0 + 1e-9)
        for f in (x_over_sinh, x_over_tanh, tanh_over_x):
            assert_close(f(below), f(above), 1e-12)

    def test_limits(self):
        assert x_over_sinh(0.0) == 1.0
        assert x_over_tanh(0.0) == 1.0
        assert tanh_over_x(0.0) == 1.0

    def test_large_argument(self):
        assert x_over_sinh(800.0) == 0.0 or x_over_sinh(800.0) < 1e-300
        assert_close(x_over_tanh(800.0), 800.0, 1e-14)


class TestMehlerKernel:
    def test_matches_textbook_form(self):
        for omega, t, x, y in [(1.0, 1.0, 0.0, 0.0), (0.5, 2.0, 0.3, -1.1), (2.0, 0.25, 1.5, 1.2)]:
            assert_close(mehler_kernel(MehlerParams(omega, t), x, y), textbook_mehler(omega, t, x, y), 1e-12)

    def test_free_kernel_at_zero_frequency(self):
        t, x, y = 0.7, 0.4, -0.3
        free = (4.0 * math.pi * t) ** -0.5 * math.exp(-((x - y) ** 2) / (4.0 * t))
        assert_close(mehler_kernel(MehlerParams(0.0, t), x, y), free, 1e-12)

    def test_symmetric_and_even_in_omega(self):
        a = mehler_kernel(MehlerParams(1.3, 0.8), 0.2, 0.9)
        assert a == mehler_kernel(MehlerParams(1.3, 0.8), 0.9, 0.2)
        assert a == mehler_kernel(MehlerParams(-1.3, 0.8), 0.2, 0.9)

    def test_large_frequency_stays_finite(self):
        value = mehler_kernel(MehlerParams(300.0, 1.0), 0.0, 0.0)
        assert math.isfinite(value)
        assert value > 0.0

    def test_semigroup_property(self):
        omega, x, y = 1.0, 0.3, -0.2
        half = MehlerParams(omega, 0.5)
        composed = adaptive_quad(lambda z: mehler_kernel(half, x, z) * mehler_kernel(half, z, y), -20.0, 20.0, TIGHT_SPEC)
        assert_close(composed, mehler_kernel(MehlerParams(omega, 1.0), x, y), 1e-9)

    def test_invalid_time(self):
        with pytest.raises(ParameterError):
            MehlerParams(1.0, 0.0)


class TestOscillatorTrace:
    def test_closed_form(self):
        for omega, t in [(1.0, 1.0), (-0.5, 2.0), (2.0, 0.05)]:
            assert_close(oscillator_heat_trace(MehlerParams(omega, t)), 1.0 / (2.0 * math.sinh(abs(omega) * t)), 1e-12)

    def test_truncated_series(self):
        assert_close(oscillator_heat_trace(MehlerParams(1.0, 1.0), n_max=0), math.exp(-1.0), 1e-15)

    def test_zero_frequency(self):
        with pytest.raises(ParameterError):
            oscillator_heat_trace(MehlerParams(0.0, 1.0))
        with pytest.raises(ParameterError):
            mehler_diagonal_trace(MehlerParams(0.0, 1.0))

    def test_diagonal_integral_matches_spectrum(self):
        for omega in (0.5, 1.0, 2.0):
            for t in (0.5, 1.0, 2.0):
                params = MehlerParams(omega, t)
                assert_close(mehler_diagonal_trace(params), oscillator_heat_trace(params), 1e-8)


class TestSymbolTrace:
    def test_diagonal_kernel_is_shifted_mehler(self):
        t, p2, p3 = 0.8, 0.7, 1.3
        shift = -p2 / p3
        expected = mehler_kernel(MehlerParams(p3, t), shift, shift) * math.exp(-p3 * p3 * t)
        assert_close(heisenberg_diagonal_kernel(t, p2, p3), expected, 1e-10)

    def test_diagonal_kernel_is_even(self):
        value = heisenberg_diagonal_kernel(1.0, 0.4, 0.9)
        assert_close(heisenberg_diagonal_kernel(1.0, -0.4, 0.9), value, 1e-15)
        assert_close(heisenberg_diagonal_kernel(1.0, 0.4, -0.9), value, 1e-15)

    @pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 5.0])
    def test_plane_and_line_agree(self, t):
        assert_close(heisenberg_symbol_trace_2d(t), heisenberg_symbol_trace_reduced(t), 1e-8)

    def test_traces_decrease_in_time(self):
        times = (0.1, 0.5, 1.0, 2.0, 5.0)
        for trace in (heisenberg_symbol_trace_reduced, heisenberg_symbol_trace_2d, lambda t: heisenberg_trace_rhs(t, 0.1)):
            values = [trace(t) for t in times]
            assert all(later < earlier for earlier, later in zip(values, values[1:]))

    def test_small_time_limit(self):
        # (1/2) t^-1 sqrt(pi / t) at t = 0.01
        assert_close(heisenberg_symbol_trace_reduced(0.01), 886.2269, 0.01)

    def test_agrees_with_oracle(self):
        assert_close(heisenberg_symbol_trace_reduced(1.0, TIGHT_SPEC), heisenberg_reduced_oracle(1.0, dps=20), 1e-10)

    def test_invalid_time(self):
        with pytest.raises(ParameterError):
            heisenberg_symbol_trace_reduced(-1.0)
        with pytest.raises(ParameterError):
            HeisenbergParams(alpha=1.0, t=1.0, epsilon=0.0)


class TestTraceAsymptotics:
    def test_inverse_square_scaling(self):
        assert_close(heisenberg_trace_rhs(1.0, 0.05) / heisenberg_trace_rhs(1.0, 0.1), 4.0, 1e-13)

    def test_prediction_equals_explicit_form(self):
        for t in (0.1, 1.0, 5.0):
            assert_close(heisenberg_trace_prediction(t, 0.1), heisenberg_trace_rhs(t, 0.1), 1e-12)

    def test_consistency_report(self):
        report = heisenberg_consistency_report(1.0, 0.1)
        assert report["passed"]
        assert report["max_discrepancy"] < 1e-7
        assert_close(report["rhs_scaled"], report["trace_reduced"], 1e-12)

    def test_rhs_rejects_bad_epsilon(self):
        with pytest.raises(ParameterError):
            heisenberg_trace_rhs(1.0, 0.0)
