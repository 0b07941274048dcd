import math

import numpy as np
import pytest

from adialab.errors import ConvergenceError, ParameterError
from adialab.numerics import (
    adaptive_quad,
    banded_sym_eigs,
    banded_sym_eigs_below,
    dense_sym_eigs,
    dense_sym_eigs_below,
    fit_power_law,
    integrate_line,
    integrate_plane,
    periodic_band,
    stieltjes_power_integral,
    sym_tridiag_eigs,
    sym_tridiag_eigs_below,
)
from adialab.types import Discretization1D, LeafwiseCountingFunction, QuadratureSpec
from tests.utils import TIGHT_SPEC, assert_close


def laplacian_eigenvalues(n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    return 2.0 - 2.0 * np.cos(k * np.pi / (n + 1))


class TestQuadrature:
    def test_gaussian_on_line(self):
        for t in (0.1, 0.5, 1.0, 5.0):
            assert_close(integrate_line(lambda x: math.exp(-t * x * x), t, TIGHT_SPEC), math.sqrt(math.pi / t), 1e-10)

    def test_gaussian_on_plane(self):
        t = 0.7
        value = integrate_plane(lambda u, v: math.exp(-t * (u * u + v * v)), t, TIGHT_SPEC)
        assert_close(value, math.pi / t, 1e-9)

    def test_plane_with_varying_inner_decay(self):
        # inner Gaussian narrows with v; integral of sqrt(pi / (1 + v^2)) exp(-v^2)
        value = integrate_plane(
            lambda u, v: math.exp(-(1.0 + v * v) * u * u - v * v),
            1.0,
            TIGHT_SPEC,
            inner_decay=lambda v: 1.0 + v * v,
        )
        expected = integrate_line(lambda v: math.sqrt(math.pi / (1.0 + v * v)) * math.exp(-v * v), 1.0, TIGHT_SPEC)
        assert_close(value, expected, 1e-9)

    def test_finite_interval(self):
        assert_close(adaptive_quad(math.sin, 0.0, math.pi, TIGHT_SPEC), 2.0, 1e-12)

    def test_line_integral_is_linear(self):
        t = 0.8

        def f(x):
            return math.exp(-t * x * x)

        def g(x):
            return x * x * math.exp(-t * x * x)

        combined = integrate_line(lambda x: 2.0 * f(x) - 3.0 * g(x), t, TIGHT_SPEC)
        separate = 2.0 * integrate_line(f, t, TIGHT_SPEC) - 3.0 * integrate_line(g, t, TIGHT_SPEC)
        assert_close(combined, separate, 1e-10)

    def test_odd_integrand_vanishes(self):
        assert abs(integrate_line(lambda x: x * math.exp(-x * x), 1.0, TIGHT_SPEC)) < 1e-12
        assert abs(integrate_line(lambda x: math.sin(x) * math.exp(-0.5 * x * x), 0.5, TIGHT_SPEC)) < 1e-12

    def test_non_convergence_names_operation(self):
        spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-15, max_refinements=1)
        with pytest.raises(ConvergenceError) as excinfo:
            adaptive_quad(lambda x: math.sin(1.0 / x) if x > 0 else 0.0, 0.0, 1.0, spec, operation="oscillating")
        assert excinfo.value.operation == "oscillating"
        assert excinfo.value.estimates is not None

    def test_truncation_radius_floor(self):
        spec = QuadratureSpec()
        assert spec.truncation_radius(1.0) >= 8.0
        assert spec.truncation_radius(0.01) >= 80.0

    def test_invalid_spec(self):
        with pytest.raises(ParameterError):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(ParameterError):
            QuadratureSpec(max_refinements=0)


class TestEigensolvers:
    def test_tridiagonal_smallest(self):
        n = 50
        eigs = sym_tridiag_eigs(np.full(n, 2.0), np.full(n - 1, -1.0), 5)
        np.testing.assert_allclose(eigs, laplacian_eigenvalues(n)[:5], rtol=1e-12)

    def test_tridiagonal_single(self):
        np.testing.assert_array_equal(sym_tridiag_eigs([3.0], [], 1), [3.0])

    def test_tridiagonal_below(self):
        n = 50
        upper = 2.0 - 2.0 * math.cos(5.5 * math.pi / (n + 1))
        eigs = sym_tridiag_eigs_below(np.full(n, 2.0), np.full(n - 1, -1.0), upper)
        assert eigs.size == 5
        assert np.all(np.diff(eigs) > 0)

    def test_tridiagonal_below_nothing(self):
        assert sym_tridiag_eigs_below(np.full(4, 2.0), np.full(3, -1.0), -5.0).size == 0

    def test_bad_k(self):
        with pytest.raises(ParameterError):
            sym_tridiag_eigs(np.full(4, 2.0), np.full(3, -1.0), 5)
        with pytest.raises(ParameterError):
            sym_tridiag_eigs(np.full(4, 2.0), np.full(2, -1.0), 1)

    def test_dense_matches_tridiagonal(self):
        n = 30
        matrix = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
        np.testing.assert_allclose(dense_sym_eigs(matrix, 4), laplacian_eigenvalues(n)[:4], rtol=1e-12)
        assert dense_sym_eigs_below(matrix, 1.0).size == int(np.sum(laplacian_eigenvalues(n) <= 1.0))

    def test_dense_rejects_asymmetric(self):
        with pytest.raises(ParameterError):
            dense_sym_eigs(np.array([[1.0, 2.0], [0.0, 1.0]]), 1)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_tridiagonal_matches_dense_on_random_matrices(self, seed):
        rng = np.random.default_rng(seed)
        n = 40
        d = rng.normal(size=n)
        e = rng.normal(size=n - 1)
        matrix = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        expected = np.linalg.eigvalsh(matrix)
        np.testing.assert_allclose(sym_tridiag_eigs(d, e, n), expected, rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(dense_sym_eigs(matrix, n), expected, rtol=1e-10, atol=1e-10)
        upper = float(np.median(expected))
        assert sym_tridiag_eigs_below(d, e, upper).size == int(np.sum(expected <= upper))

    @pytest.mark.parametrize("n", [3, 4, 9, 10])
    def test_periodic_band_matches_dense(self, n):
        rng = np.random.default_rng(n)
        d = rng.normal(size=n)
        c = rng.normal(size=n)
        matrix = np.diag(d)
        for j in range(n):
            matrix[j, (j + 1) % n] += c[j]
            matrix[(j + 1) % n, j] += c[j]
        expected = np.linalg.eigvalsh(matrix)
        band = periodic_band(d, c)
        np.testing.assert_allclose(banded_sym_eigs(band, n), expected, rtol=1e-10, atol=1e-10)
        upper = float(np.median(expected))
        assert banded_sym_eigs_below(band, upper).size == int(np.sum(expected <= upper))

    def test_periodic_band_rejects_short_cycles(self):
        with pytest.raises(ParameterError):
            periodic_band([1.0, 1.0], [0.5, 0.5])
        with pytest.raises(ParameterError):
            periodic_band([1.0, 1.0, 1.0], [0.5, 0.5])


class TestFitsAndStieltjes:
    def test_exact_power_law(self):
        samples = [(eps, 3.0 * eps**-1.5) for eps in (0.1, 0.05, 0.02)]
        fit = fit_power_law(samples)
        assert_close(fit.coefficient, 3.0, 1e-10)
        assert_close(fit.exponent, 1.5, 1e-10)
        assert fit.residual < 1e-10
        assert fit.n_points == 3
        assert_close(fit.predict(0.01), 3.0 * 0.01**-1.5, 1e-9)

    def test_fit_rejects_bad_samples(self):
        with pytest.raises(ParameterError):
            fit_power_law([(0.1, 1.0)])
        with pytest.raises(ParameterError):
            fit_power_law([(0.1, 1.0), (0.05, -1.0)])
        with pytest.raises(ParameterError):
            fit_power_law([(0.1, 1.0), (0.1, 2.0)])

    def test_power_law_integral(self):
        counting = LeafwiseCountingFunction.power_law(1.0 / math.pi, 0.5)
        assert_close(stieltjes_power_integral(counting, 1, 8.0), 8.0 / 4.0, 1e-14)

    def test_jump_integral(self):
        counting = LeafwiseCountingFunction.from_jumps([1.0, 0.0], [2.0, 1.0])
        # 1 * (3 - 0)^1 + 2 * (3 - 1)^1
        assert_close(stieltjes_power_integral(counting, 2, 3.0), 7.0, 1e-14)
        assert stieltjes_power_integral(counting, 2, -1.0) == 0.0

    @pytest.mark.parametrize(
        "counting",
        [
            LeafwiseCountingFunction.power_law(1.0 / math.pi, 0.5),
            LeafwiseCountingFunction.from_jumps([0.0, 1.0, 4.0], [1.0, 2.0, 2.0]),
        ],
    )
    def test_integral_grows_with_cutoff(self, counting):
        values = [stieltjes_power_integral(counting, 1, lam) for lam in (0.5, 1.0, 2.0, 4.5, 8.0)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] > values[0]

    def test_jump_integral_beyond_support(self):
        counting = LeafwiseCountingFunction.from_jumps([0.0], [1.0], support_max=5.0)
        with pytest.raises(ParameterError):
            stieltjes_power_integral(counting, 1, 6.0)


class TestTypes:
    def test_counting_function_is_right_continuous(self):
        counting = LeafwiseCountingFunction.from_jumps([1.0, 4.0], [0.5, 0.5])
        assert counting(0.5) == 0.0
        assert counting(1.0) == 0.5
        assert counting(4.0) == 1.0
        assert counting(-1.0) == 0.0

    def test_dirichlet_grid(self):
        disc = Discretization1D.dirichlet(2.0, 99)
        assert_close(disc.spacing, 0.04, 1e-14)
        nodes = disc.nodes()
        assert nodes.size == 99
        assert_close(nodes[0], -1.96, 1e-12)
        assert_close(nodes[-1], 1.96, 1e-12)

    def test_periodic_grid(self):
        disc = Discretization1D.periodic(10)
        assert disc.nodes()[0] == 0.0
        assert_close(disc.spacing, 0.1, 1e-15)

    def test_bad_grid(self):
        with pytest.raises(ParameterError):
            Discretization1D.periodic(2)
        with pytest.raises(ParameterError):
            Discretization1D.dirichlet(-1.0, 10)
