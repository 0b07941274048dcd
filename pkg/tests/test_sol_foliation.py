import math

import numpy as np
import pytest

from adialab.errors import MatrixValidationError, ParameterError, TruncationSensitivityError
from adialab.golden import mathieu_phase_area_oracle, sol_symbol_trace_oracle
from adialab.types import Discretization1D
from foliations.heisenberg_foliation import heisenberg_symbol_trace_reduced
from foliations.sol_foliation import (
    MISMATCH_LIMIT,
    MathieuModel,
    SolParams,
    mathieu_count,
    mathieu_discretization,
    mathieu_eigs,
    mathieu_phase_area,
    mathieu_phase_area_derivative,
    mathieu_weyl_check,
    sol_actual_trace_prediction,
    sol_counting_laplace_transform,
    sol_counting_prediction,
    sol_matrix_validate,
    sol_mismatch_ratio,
    sol_nc_weyl_prediction,
    sol_riemannian_trace_prediction,
    sol_symbol_trace,
)
from tests.utils import TIGHT_SPEC, assert_close

GOLDEN_RATIO_SQUARED = (3.0 + math.sqrt(5.0)) / 2.0


class TestMatrix:
    def test_cat_map(self):
        info = sol_matrix_validate(((2, 1), (1, 1)))
        assert_close(info.lambda_a, GOLDEN_RATIO_SQUARED, 1e-15)
        assert info.positively_oriented is False

    def test_negative_trace(self):
        info = sol_matrix_validate(((-2, -1), (-1, -1)))
        assert_close(info.lambda_a, GOLDEN_RATIO_SQUARED, 1e-15)

    @pytest.mark.parametrize(
        "matrix, condition",
        [
            (((1, 1), (0, 1)), "|tr A| > 2"),
            (((2, 0), (0, 1)), "det A = 1"),
            (((1.5, 0), (0, 1)), "integer entries"),
            (((2, 1, 0), (1, 1, 0)), "shape"),
        ],
    )
    def test_rejected(self, matrix, condition):
        with pytest.raises(MatrixValidationError) as excinfo:
            sol_matrix_validate(matrix)
        assert excinfo.value.condition == condition

    def test_params_validate_matrix(self):
        with pytest.raises(MatrixValidationError):
            SolParams(matrix=((1, 0), (0, 1)), alpha=1.0)
        params = SolParams(matrix=((2, 1), (1, 1)), alpha=1.0)
        assert_close(params.lambda_a, GOLDEN_RATIO_SQUARED, 1e-15)
        assert params.mathieu(0.1) == MathieuModel(a=1.0, mu=1.0, epsilon=0.1)


class TestMathieuSpectrum:
    def test_ground_state_is_nearly_harmonic(self):
        # cosh(2x) ~ 1 + 2x^2, so the ground state sits near 1 + eps sqrt(2)
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.05)
        eigs = mathieu_eigs(model, mathieu_discretization(model, 2.0), 1, lam_max=2.0)
        assert_close(eigs[0], 1.0707, 0.01)

    def test_ground_state_grows_with_amplitude(self):
        low = MathieuModel(a=1.0, mu=1.0, epsilon=0.1)
        high = MathieuModel(a=2.0, mu=1.0, epsilon=0.1)
        assert mathieu_eigs(low, mathieu_discretization(low, 4.0), 1, 4.0)[0] < mathieu_eigs(high, mathieu_discretization(high, 4.0), 1, 4.0)[0]

    def test_truncation_certificate(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.05)
        with pytest.raises(TruncationSensitivityError):
            # cosh(0.6) clears 10 * lam_max, but L = 0.3 cuts into the ground state
            mathieu_eigs(model, Discretization1D.dirichlet(0.3, 299), 3, lam_max=0.1)

    def test_interval_too_short_for_cutoff(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.05)
        with pytest.raises(ParameterError):
            mathieu_eigs(model, Discretization1D.dirichlet(0.5, 99), 1, lam_max=5.0)

    def test_lam_max_must_be_positive(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.1)
        with pytest.raises(ParameterError):
            mathieu_eigs(model, mathieu_discretization(model, 2.0), 1, lam_max=0.0)

    def test_eigenvalues_are_simple_and_above_the_well(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.1)
        eigs = mathieu_eigs(model, mathieu_discretization(model, 5.0), 10, lam_max=5.0)
        assert np.all(eigs > model.a)
        assert np.all(np.diff(eigs) > 1e-8)

    def test_grid_refinement(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=1.0)
        half_width = mathieu_discretization(model, 30.0).half_width
        coarse = mathieu_eigs(model, Discretization1D.dirichlet(half_width, 4000), 5, lam_max=30.0)
        fine = mathieu_eigs(model, Discretization1D.dirichlet(half_width, 8000), 5, lam_max=30.0)
        assert np.all(coarse < 30.0)
        np.testing.assert_allclose(coarse, fine, rtol=1e-5)

    def test_invalid_model(self):
        with pytest.raises(ParameterError):
            MathieuModel(a=1.0, mu=0.0, epsilon=0.1)


class TestPhaseArea:
    def test_empty_below_the_well(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.1)
        assert mathieu_phase_area(model, 1.0) == 0.0
        assert mathieu_phase_area(model, 0.5) == 0.0
        assert mathieu_phase_area_derivative(model, 0.5) == 0.0

    @pytest.mark.parametrize("lam", [2.0, 5.0])
    def test_agrees_with_oracle(self, lam):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.1)
        assert_close(mathieu_phase_area(model, lam, TIGHT_SPEC), mathieu_phase_area_oracle(1.0, 1.0, lam, dps=20), 1e-10)

    def test_derivative_is_the_period(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.1)
        lam, step = 5.0, 1e-4
        difference = (mathieu_phase_area(model, lam + step, TIGHT_SPEC) - mathieu_phase_area(model, lam - step, TIGHT_SPEC)) / (2.0 * step)
        assert_close(mathieu_phase_area_derivative(model, lam, TIGHT_SPEC), difference, 1e-5)

    def test_weyl_count(self):
        report = mathieu_weyl_check(MathieuModel(a=1.0, mu=1.0, epsilon=0.01), 5.0)
        assert report["count"] > 0
        assert abs(report["ratio"] - 1.0) <= 0.03

    def test_count_error_shrinks_with_epsilon(self):
        # each level holds 2 pi eps of phase area, so halving eps halves the bound on |ratio - 1|
        bounds = []
        for eps in (0.04, 0.02, 0.01):
            report = mathieu_weyl_check(MathieuModel(a=1.0, mu=1.0, epsilon=eps), 5.0)
            assert abs(report["count"] - report["prediction"]) <= 1.0
            bounds.append(1.0 / report["prediction"])
            assert abs(report["ratio"] - 1.0) <= bounds[-1] * (1.0 + 1e-12)
        assert_close(bounds[0] / bounds[2], 4.0, 1e-12)

    def test_no_states_below_the_well(self):
        model = MathieuModel(a=1.0, mu=1.0, epsilon=0.05)
        assert mathieu_count(model, 0.5) == 0
        report = mathieu_weyl_check(model, 0.5)
        assert report["prediction"] == 0.0
        assert math.isnan(report["ratio"])


class TestTraceAsymptotics:
    def test_counting_predictions(self):
        assert_close(sol_counting_prediction(1.0, 1.0, 0.1), 2.5330296, 1e-7)
        assert_close(sol_counting_prediction(0.0, 1.0, 0.1), 1.6886864, 1e-7)
        assert sol_counting_prediction(1.0, -1.0, 0.1) == 0.0

    def test_actual_trace(self):
        assert_close(sol_actual_trace_prediction(1.0, 1.0, 0.1), 3.36726, 1e-5)
        with pytest.raises(ParameterError):
            sol_actual_trace_prediction(0.0, 1.0, 0.1)

    def test_laplace_transform_of_counting_law(self):
        for t in (0.5, 1.0, 2.0):
            assert_close(sol_counting_laplace_transform(0.5, t, 0.1), sol_actual_trace_prediction(0.5, t, 0.1), 1e-8)
            assert_close(sol_counting_laplace_transform(0.0, t, 0.1), sol_riemannian_trace_prediction(t, 0.1), 1e-8)

    def test_riemannian_symbol_trace(self):
        assert_close(sol_symbol_trace(0.0, 1.0), math.sqrt(math.pi) / 2.0, 1e-15)
        assert_close(sol_nc_weyl_prediction(0.0, 2.0, 0.1), sol_riemannian_trace_prediction(2.0, 0.1), 1e-12)

    def test_unit_slope_is_the_heisenberg_trace(self):
        assert_close(sol_symbol_trace(1.0, 1.0), heisenberg_symbol_trace_reduced(1.0), 1e-14)

    def test_symbol_trace_agrees_with_oracle(self):
        assert_close(sol_symbol_trace(0.5, 1.0, TIGHT_SPEC), sol_symbol_trace_oracle(0.5, 1.0, dps=20), 1e-10)

    def test_symbol_trace_decreases_towards_unit_slope(self):
        values = [sol_symbol_trace(alpha, 1.0) for alpha in (0.0, 0.25, 0.5, 1.0)]
        assert values == sorted(values, reverse=True)


class TestMismatch:
    @pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0, 2.0, 10.0, -1.0])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_below_two_thirds(self, alpha, t):
        assert 0.0 < sol_mismatch_ratio(alpha, t) < MISMATCH_LIMIT

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_clears_the_acceptance_margin(self, alpha, t):
        assert sol_mismatch_ratio(alpha, t) < MISMATCH_LIMIT - 0.01

    def test_slope_and_inverse_slope_agree(self):
        assert_close(sol_mismatch_ratio(0.1, 0.5), sol_mismatch_ratio(10.0, 0.5), 1e-10)
        assert sol_mismatch_ratio(0.1, 0.5) > MISMATCH_LIMIT - 0.01

    def test_near_riemannian_limit(self):
        assert abs(sol_mismatch_ratio(1e-3, 1.0) - MISMATCH_LIMIT) < 1e-4

    def test_independent_of_epsilon(self):
        assert_close(sol_mismatch_ratio(1.0, 1.0, epsilon=0.01), sol_mismatch_ratio(1.0, 1.0), 1e-12)

    def test_undefined_for_riemannian_slope(self):
        with pytest.raises(ParameterError):
            sol_mismatch_ratio(0.0, 1.0)
