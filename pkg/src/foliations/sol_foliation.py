"""
Sol manifolds: the suspension of a hyperbolic matrix A in SL(2, Z).

Counting for the adiabatic limit reduces to the semiclassical Weyl law of
the modified Mathieu operator -eps^2 d^2/dx^2 + a cosh(2 mu x), which is
solved here by finite differences on a truncated interval. The module also
carries the closed-form counting and heat-trace asymptotics and the
beta-deformed symbol trace whose ratio to the actual trace stays below
2/3 whenever alpha != 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from typing_extensions import TypedDict

from adialab.config import get_default_quadrature_spec
from adialab.errors import MatrixValidationError, ParameterError, TruncationSensitivityError
from adialab.numerics import adaptive_quad, integrate_line, sym_tridiag_eigs, sym_tridiag_eigs_below
from adialab.types import Discretization1D, QuadratureSpec
from foliations.heisenberg_foliation import x_over_sinh
from foliations.torus_foliation import nc_weyl_prediction

logger = logging.getLogger(__name__)

DEFAULT_KH = 0.05
TRUNCATION_FACTOR = 10.0
TRUNCATION_REL_TOL = 1e-6
# Half-width growth for the second run of the truncation certificate.
CERTIFICATE_STRETCH = 1.25
MISMATCH_LIMIT = 2.0 / 3.0


###########################
# Matrix validation
###########################


@dataclass(frozen=True)
class SolMatrixInfo:
    lambda_a: float
    positively_oriented: bool


def sol_matrix_validate(matrix: Sequence[Sequence[int]]) -> SolMatrixInfo:
    """Check det A = 1 and |tr A| > 2; return the expanding eigenvalue.

    The orientation flag says whether (v_expanding, v_contracting) is a
    positively oriented basis of R^2.
    """
    m = np.asarray(matrix)
    if m.shape != (2, 2):
        raise MatrixValidationError("shape", f"A must be 2x2, got shape {m.shape}")
    if not np.all(np.equal(np.mod(m, 1), 0)):
        raise MatrixValidationError("integer entries", f"A must have integer entries, got {m.tolist()}")
    a, b, c, d = (int(v) for v in m.ravel())
    det = a * d - b * c
    if det != 1:
        raise MatrixValidationError("det A = 1", f"det A = {det}, expected 1")
    trace = a + d
    if abs(trace) <= 2:
        raise MatrixValidationError("|tr A| > 2", f"|tr A| = {abs(trace)} is not greater than 2")

    root = math.sqrt(trace * trace - 4)
    lambda_a = (abs(trace) + root) / 2.0
    # eigenvalues of A itself carry the sign of the trace
    sign = 1.0 if trace > 0 else -1.0
    expanding, contracting = sign * lambda_a, sign / lambda_a

    def eigenvector(mu: float) -> np.ndarray:
        if b != 0:
            return np.array([b, mu - a], dtype=float)
        return np.array([mu - d, c], dtype=float)

    basis = np.column_stack([eigenvector(expanding), eigenvector(contracting)])
    return SolMatrixInfo(lambda_a=lambda_a, positively_oriented=bool(np.linalg.det(basis) > 0))


@dataclass(frozen=True)
class SolParams:
    matrix: tuple[tuple[int, int], tuple[int, int]]
    alpha: float
    a: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        sol_matrix_validate(self.matrix)
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")
        if not self.mu > 0:
            raise ParameterError(f"mu must be positive, got {self.mu}")

    @property
    def lambda_a(self) -> float:
        return sol_matrix_validate(self.matrix).lambda_a

    def mathieu(self, epsilon: float) -> "MathieuModel":
        return MathieuModel(a=self.a, mu=self.mu, epsilon=epsilon)


###########################
# Modified Mathieu operator
###########################


@dataclass(frozen=True)
class MathieuModel:
    """-eps^2 d^2/dx^2 + a cosh(2 mu x) on the line."""

    a: float
    mu: float
    epsilon: float

    def __post_init__(self):
        for name in ("a", "mu", "epsilon"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")

    def potential(self, x: np.ndarray) -> np.ndarray:
        return self.a * np.cosh(2.0 * self.mu * np.asarray(x, dtype=float))


class MathieuWeylReport(TypedDict):
    epsilon: float
    lam: float
    count: int
    prediction: float
    ratio: float


def mathieu_discretization(model: MathieuModel, lam_max: float, kh: float = DEFAULT_KH) -> Discretization1D:
    """Dirichlet grid on [-L, L] with L = arccosh(10 lam_max / a) / (2 mu) and spacing kh * eps / sqrt(lam_max)."""
    if not kh > 0:
        raise ParameterError(f"kh must be positive, got {kh}")
    lam_max = max(lam_max, model.a)
    half_width = math.acosh(TRUNCATION_FACTOR * lam_max / model.a) / (2.0 * model.mu)
    h = kh * model.epsilon / math.sqrt(lam_max)
    n_points = max(3, math.ceil(2.0 * half_width / h) - 1)
    return Discretization1D.dirichlet(half_width, n_points)


def _stretched(disc: Discretization1D) -> Discretization1D:
    """Same spacing, half-width grown by CERTIFICATE_STRETCH."""
    n_points = round(CERTIFICATE_STRETCH * (disc.n_points + 1)) - 1
    return Discretization1D.dirichlet(disc.spacing * (n_points + 1) / 2.0, n_points)


def _mathieu_tridiagonal(model: MathieuModel, disc: Discretization1D) -> tuple[np.ndarray, np.ndarray]:
    if disc.boundary != "dirichlet":
        raise ParameterError("Mathieu eigensolves need a Dirichlet discretization")
    scale = (model.epsilon / disc.spacing) ** 2
    diag = 2.0 * scale + model.potential(disc.nodes())
    offdiag = np.full(disc.n_points - 1, -scale)
    return diag, offdiag


def _certify(model: MathieuModel, disc: Discretization1D, eigenvalues: np.ndarray) -> None:
    if eigenvalues.size == 0:
        return
    wider = sym_tridiag_eigs(*_mathieu_tridiagonal(model, _stretched(disc)), eigenvalues.size)
    deviation = float(np.max(np.abs(wider - eigenvalues) / np.abs(eigenvalues)))
    logger.debug("mathieu truncation certificate: L=%g max relative change %.3g", disc.half_width, deviation)
    if deviation > TRUNCATION_REL_TOL:
        raise TruncationSensitivityError(
            "mathieu_eigs",
            f"eigenvalues moved by {deviation:.3g} relative when L grew from {disc.half_width:g}",
            estimates=(float(eigenvalues[-1]), float(wider[-1])),
        )


def mathieu_eigs(
    model: MathieuModel,
    disc: Discretization1D,
    k: int,
    lam_max: float,
) -> np.ndarray:
    """k smallest Dirichlet eigenvalues, certified against a run on a wider interval.

    lam_max is the top of the spectral window the caller needs; the interval
    must satisfy a cosh(2 mu L) >= 10 lam_max.
    """
    if not lam_max > 0:
        raise ParameterError(f"lam_max must be positive, got {lam_max}")
    if model.a * math.cosh(2.0 * model.mu * disc.half_width) < TRUNCATION_FACTOR * lam_max * (1 - 1e-12):
        raise ParameterError(
            f"half_width {disc.half_width:g} too small: need a cosh(2 mu L) >= {TRUNCATION_FACTOR:g} * {lam_max:g}"
        )
    eigenvalues = sym_tridiag_eigs(*_mathieu_tridiagonal(model, disc), k)
    _certify(model, disc, eigenvalues)
    return eigenvalues


def mathieu_count(
    model: MathieuModel,
    lam: float,
    disc: Optional[Discretization1D] = None,
    kh: float = DEFAULT_KH,
) -> int:
    """Number of eigenvalues <= lam, with the same truncation certificate as mathieu_eigs."""
    disc = disc or mathieu_discretization(model, lam, kh)
    eigenvalues = sym_tridiag_eigs_below(*_mathieu_tridiagonal(model, disc), lam)
    _certify(model, disc, eigenvalues)
    logger.debug("mathieu_count: eps=%g lam=%g n=%d count=%d", model.epsilon, lam, disc.n_points, eigenvalues.size)
    return int(eigenvalues.size)


def _turning_point(model: MathieuModel, lam: float) -> float:
    return math.acosh(lam / model.a) / (2.0 * model.mu)


def _gap(model: MathieuModel, lam: float, theta: float) -> float:
    """lam - V(x0 sin theta), factored so it stays accurate near the turning point."""
    c = math.acosh(lam / model.a)
    s = math.sin(theta)
    one_minus_s = math.cos(theta) ** 2 / (1.0 + s)
    return 2.0 * model.a * math.sinh(c * (1.0 + s) / 2.0) * math.sinh(c * one_minus_s / 2.0)


def mathieu_phase_area(model: MathieuModel, lam: float, spec: Optional[QuadratureSpec] = None) -> float:
    """Area of {xi^2 + a cosh(2 mu x) <= lam}, integrated in x = x0 sin theta."""
    if lam <= model.a:
        return 0.0
    spec = spec or get_default_quadrature_spec()
    x0 = _turning_point(model, lam)
    half = adaptive_quad(
        lambda th: math.sqrt(_gap(model, lam, th)) * math.cos(th),
        0.0,
        math.pi / 2.0,
        spec,
        operation="mathieu_phase_area",
    )
    return 4.0 * x0 * half


def mathieu_phase_area_derivative(model: MathieuModel, lam: float, spec: Optional[QuadratureSpec] = None) -> float:
    """d/d lam of the phase area, int (lam - V)_+^(-1/2) dx (the classical period)."""
    if lam <= model.a:
        return 0.0
    spec = spec or get_default_quadrature_spec()
    x0 = _turning_point(model, lam)
    half = adaptive_quad(
        lambda th: math.cos(th) / math.sqrt(_gap(model, lam, th)),
        0.0,
        math.pi / 2.0,
        spec,
        operation="mathieu_phase_area_derivative",
    )
    return 2.0 * x0 * half


def mathieu_weyl_check(
    model: MathieuModel,
    lam: float,
    disc: Optional[Discretization1D] = None,
    kh: float = DEFAULT_KH,
    spec: Optional[QuadratureSpec] = None,
) -> MathieuWeylReport:
    """Eigenvalue count against area / (2 pi eps)."""
    count = mathieu_count(model, lam, disc, kh)
    prediction = mathieu_phase_area(model, lam, spec) / (2.0 * math.pi * model.epsilon)
    return {
        "epsilon": model.epsilon,
        "lam": lam,
        "count": count,
        "prediction": prediction,
        "ratio": count / prediction if prediction > 0 else math.nan,
    }


###########################
# Counting and trace asymptotics
###########################


def sol_beta(alpha: float) -> float:
    return 2.0 * alpha / (1.0 + alpha * alpha)


def sol_counting_prediction(alpha: float, lam: float, epsilon: float) -> float:
    """Leading term of N_eps(lam): lam^(3/2) eps^-2 over 4 pi^2, or over 6 pi^2 when alpha == 0."""
    if lam <= 0:
        return 0.0
    denominator = 6.0 * math.pi**2 if alpha == 0 else 4.0 * math.pi**2
    return lam**1.5 / (denominator * epsilon**2)


def sol_counting_laplace_transform(
    alpha: float, t: float, epsilon: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """int_0^inf exp(-t lam) d[sol_counting_prediction] by quadrature in lam = eta^2."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    spec = spec or get_default_quadrature_spec()
    coefficient = sol_counting_prediction(alpha, 1.0, epsilon)
    moment = 0.5 * integrate_line(lambda eta: 3.0 * eta * eta * math.exp(-t * eta * eta), t, spec)
    return coefficient * moment


def sol_symbol_trace(alpha: float, t: float, spec: Optional[QuadratureSpec] = None) -> float:
    """(1/2) int beta eta / sinh(beta t eta) exp(-t eta^2) d eta with beta = 2 alpha / (1 + alpha^2)."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    if alpha == 0:
        return math.sqrt(math.pi) / (2.0 * t**1.5)
    spec = spec or get_default_quadrature_spec()
    beta = sol_beta(alpha)
    return 0.5 * integrate_line(lambda eta: x_over_sinh(beta * t * eta) * math.exp(-t * eta * eta) / t, t, spec)


def sol_actual_trace_prediction(alpha: float, t: float, epsilon: float) -> float:
    """(3 sqrt(pi) / 16 pi^2) t^-3/2 eps^-2, the heat trace for alpha != 0."""
    if alpha == 0:
        raise ParameterError("alpha = 0 uses sol_riemannian_trace_prediction")
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    return 3.0 * math.sqrt(math.pi) / (16.0 * math.pi**2) * t**-1.5 / epsilon**2


def sol_riemannian_trace_prediction(t: float, epsilon: float) -> float:
    """(sqrt(pi) / 8 pi^2) t^-3/2 eps^-2, the heat trace for alpha = 0."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    return math.sqrt(math.pi) / (8.0 * math.pi**2) * t**-1.5 / epsilon**2


def sol_nc_weyl_prediction(alpha: float, t: float, epsilon: float, spec: Optional[QuadratureSpec] = None) -> float:
    return nc_weyl_prediction(2, epsilon, sol_symbol_trace(alpha, t, spec))


def sol_mismatch_ratio(alpha: float, t: float, epsilon: float = 1.0, spec: Optional[QuadratureSpec] = None) -> float:
    """Noncommutative Weyl prediction over the actual trace; below 2/3 for every alpha != 0."""
    if alpha == 0:
        raise ParameterError("mismatch ratio requires alpha != 0")
    return sol_nc_weyl_prediction(alpha, t, epsilon, spec) / sol_actual_trace_prediction(alpha, t, epsilon)
