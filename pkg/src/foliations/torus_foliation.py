"""
Linear foliations of the 2-torus.

The leaves are the lines of slope alpha on T^2 = R^2 / Z^2 and the
adiabatic Laplacian has the explicit eigenvalues

    lambda_kl(eps) = (2 pi)^2 [(k + alpha l)^2 + eps^2 (-alpha k + l)^2] / (1 + alpha^2).

This module counts lattice points under that quadratic form, sums heat
traces with a rigorous tail bound, and evaluates the closed-form
predictions for irrational and rational slopes.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.special import gamma, gammaincc

from adialab.config import get_default_quadrature_spec, get_lattice_budget, get_tail_tolerance
from adialab.errors import LatticeBudgetError, ParameterError, TruncationError
from adialab.numerics import integrate_line
from adialab.types import LeafwiseCountingFunction, QuadratureSpec

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

# Radius of the disk circumscribing a unit lattice cell.
_CELL_RADIUS = SQRT2 / 2.0


@dataclass(frozen=True)
class TorusFoliationParams:
    """Slope alpha and adiabatic parameter eps.

    The rational branch of every prediction is taken only when
    `rational_form` = (p, q_den) is given; a float alpha alone is treated
    as irrational.
    """

    alpha: float
    epsilon: float
    rational_form: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if self.rational_form is not None:
            p, q_den = self.rational_form
            if q_den < 1:
                raise ParameterError(f"rational denominator must be >= 1, got {q_den}")
            if math.gcd(abs(p), q_den) != 1:
                raise ParameterError(f"rational form {p}/{q_den} is not in lowest terms")
            if self.alpha != p / q_den:
                raise ParameterError(f"alpha={self.alpha} does not equal {p}/{q_den}")

    @classmethod
    def rational(cls, p: int, q_den: int, epsilon: float) -> "TorusFoliationParams":
        return cls(alpha=p / q_den, epsilon=epsilon, rational_form=(p, q_den))

    @classmethod
    def from_fraction(cls, value: Fraction, epsilon: float) -> "TorusFoliationParams":
        return cls.rational(value.numerator, value.denominator, epsilon)

    @property
    def is_rational(self) -> bool:
        return self.rational_form is not None


###########################
# Eigenvalues and counting
###########################


def torus_eigenvalue(k: int, l: int, params: TorusFoliationParams) -> float:
    return float(torus_eigenvalues(np.asarray(k), np.asarray(l), params))


def torus_eigenvalues(k: np.ndarray, l: np.ndarray, params: TorusFoliationParams) -> np.ndarray:
    alpha, eps = params.alpha, params.epsilon
    k = np.asarray(k, dtype=float)
    l = np.asarray(l, dtype=float)
    along = k + alpha * l
    across = -alpha * k + l
    return (2.0 * math.pi) ** 2 * (along**2 + eps**2 * across**2) / (1.0 + alpha**2)


def _ellipse_count_bound(params: TorusFoliationParams, lam: float) -> float:
    """Upper bound for N_eps(lam): area of the ellipse grown by a disk of one cell radius.

    The grown area is pi a b + P r + pi r^2 with perimeter P <= 4(a + b).
    """
    if lam < 0:
        return 0.0
    semi_u = math.sqrt(lam) / (2.0 * math.pi)
    semi_v = semi_u / params.epsilon
    return math.pi * semi_u * semi_v + 4.0 * (semi_u + semi_v) * _CELL_RADIUS + math.pi * _CELL_RADIUS**2


def _k_intervals(params: TorusFoliationParams, lam: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For each row l of the lattice, the integer range [k_lo, k_hi] with lambda_kl <= lam.

    In (k, l) the form is A k^2 + 2 B l k + D l^2 <= C; the row range follows
    from the quadratic formula, then each end is corrected against the exact
    eigenvalue so that ties are decided by the same arithmetic as
    torus_eigenvalues.
    """
    alpha, eps = params.alpha, params.epsilon
    c = lam * (1.0 + alpha**2) / (2.0 * math.pi) ** 2
    a_kk = 1.0 + eps**2 * alpha**2
    b_kl = alpha * (1.0 - eps**2)
    d_ll = alpha**2 + eps**2
    det = eps**2 * (1.0 + alpha**2) ** 2

    l_max = int(math.floor(math.sqrt(c * a_kk / det))) + 1
    rows = np.arange(-l_max, l_max + 1, dtype=np.int64)
    disc = (b_kl * rows) ** 2 - a_kk * (d_ll * rows**2 - c)
    root = np.sqrt(np.clip(disc, 0.0, None))
    k_lo = np.ceil((-b_kl * rows - root) / a_kk).astype(np.int64)
    k_hi = np.floor((-b_kl * rows + root) / a_kk).astype(np.int64)

    # Rounding can misplace an end by one lattice step in either direction.
    for _ in range(2):
        k_lo = np.where(torus_eigenvalues(k_lo - 1, rows, params) <= lam, k_lo - 1, k_lo)
        k_hi = np.where(torus_eigenvalues(k_hi + 1, rows, params) <= lam, k_hi + 1, k_hi)
    for _ in range(2):
        k_lo = np.where((k_lo <= k_hi) & (torus_eigenvalues(k_lo, rows, params) > lam), k_lo + 1, k_lo)
        k_hi = np.where((k_lo <= k_hi) & (torus_eigenvalues(k_hi, rows, params) > lam), k_hi - 1, k_hi)
    return rows, k_lo, k_hi


def torus_counting(params: TorusFoliationParams, lam: float, budget: Optional[int] = None) -> int:
    """N_eps(lam) = #{(k, l) in Z^2 : lambda_kl(eps) <= lam}.

    Work is proportional to the number of lattice rows crossing the ellipse,
    not to its bounding box.
    """
    if lam < 0:
        return 0
    budget = get_lattice_budget() if budget is None else budget
    predicted = _ellipse_count_bound(params, lam)
    if predicted > budget:
        raise LatticeBudgetError(predicted, budget)
    rows, k_lo, k_hi = _k_intervals(params, lam)
    count = int(np.sum(np.clip(k_hi - k_lo + 1, 0, None)))
    logger.debug("torus_counting: alpha=%g eps=%g lam=%g rows=%d count=%d", params.alpha, params.epsilon, lam, rows.size, count)
    return count


def torus_spectrum(params: TorusFoliationParams, lam_max: float, budget: Optional[int] = None) -> np.ndarray:
    """All eigenvalues <= lam_max, ascending, with multiplicity."""
    if lam_max < 0:
        return np.empty(0)
    budget = get_lattice_budget() if budget is None else budget
    predicted = _ellipse_count_bound(params, lam_max)
    if predicted > budget:
        raise LatticeBudgetError(predicted, budget)
    rows, k_lo, k_hi = _k_intervals(params, lam_max)
    lengths = np.clip(k_hi - k_lo + 1, 0, None)
    l_all = np.repeat(rows, lengths)
    starts = np.repeat(k_lo, lengths)
    offsets = np.arange(l_all.size) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    k_all = starts + offsets
    return np.sort(torus_eigenvalues(k_all, l_all, params))


###########################
# Predictions
###########################


def torus_counting_prediction(params: TorusFoliationParams, lam: float) -> float:
    """Leading term of N_eps(lam) as eps -> 0, for irrational or declared-rational slope."""
    if lam <= 0:
        return 0.0
    eps = params.epsilon
    if not params.is_rational:
        return lam / (4.0 * math.pi * eps)

    p, q_den = params.rational_form
    norm_sq = p * p + q_den * q_den
    norm = math.sqrt(norm_sq)
    k_bound = math.sqrt(lam) * norm / (2.0 * math.pi)
    k_max = int(math.ceil(k_bound)) - 1
    ks = np.arange(-k_max, k_max + 1, dtype=float)
    terms = np.sqrt(np.clip(lam - 4.0 * math.pi**2 * ks**2 / norm_sq, 0.0, None)) / (math.pi * norm)
    return float(np.sum(terms)) / eps


def torus_leafwise_counting(params: TorusFoliationParams, tau_max: float = 1e4) -> LeafwiseCountingFunction:
    """Spectrum distribution function of the leafwise Laplacian.

    Dense leaves (irrational slope) are lines, giving N_F(tau) = sqrt(tau)/pi.
    Closed leaves of length L = sqrt(p^2 + q_den^2) carry the circle spectrum
    4 pi^2 k^2 / L^2, each eigenvalue weighted by the transverse measure 1/L.
    """
    if not params.is_rational:
        return LeafwiseCountingFunction.power_law(1.0 / math.pi, 0.5)
    p, q_den = params.rational_form
    norm = math.hypot(p, q_den)
    k_max = int(math.floor(math.sqrt(tau_max) * norm / (2.0 * math.pi)))
    ks = np.arange(-k_max, k_max + 1, dtype=float)
    locations = 4.0 * math.pi**2 * ks**2 / norm**2
    return LeafwiseCountingFunction.from_jumps(locations, np.full(ks.size, 1.0 / norm), support_max=tau_max)


def nc_weyl_prediction(q_codim: int, epsilon: float, symbol_trace: float) -> float:
    """(2 pi eps)^-q times the transverse symbol trace."""
    if q_codim < 1:
        raise ParameterError(f"codimension must be a positive integer, got {q_codim}")
    return symbol_trace / (2.0 * math.pi * epsilon) ** q_codim


###########################
# Heat traces
###########################


def _heat_tail_bound(params: TorusFoliationParams, t: float, cutoff: float) -> float:
    """Bound on sum of exp(-t lambda_kl) over lambda_kl > cutoff.

    Integrating by parts against the count bound
    N+(lam) = lam/(4 pi eps) + (2 r / pi) sqrt(lam)(1 + 1/eps) + pi r^2 gives
    terms int_cutoff^inf t e^(-t lam) lam^s dlam = t^-s Gamma(s+1) Q(s+1, t cutoff).
    """
    eps = params.epsilon
    x = t * cutoff

    def moment(s: float) -> float:
        return t ** (-s) * gamma(s + 1.0) * gammaincc(s + 1.0, x)

    return (
        moment(1.0) / (4.0 * math.pi * eps)
        + 2.0 * _CELL_RADIUS * (1.0 + 1.0 / eps) / math.pi * moment(0.5)
        + math.pi * _CELL_RADIUS**2 * moment(0.0)
    )


def torus_heat_trace(
    params: TorusFoliationParams,
    t: float,
    tail_tol: Optional[float] = None,
    budget: Optional[int] = None,
) -> float:
    """tr exp(-t Delta_eps) = sum over Z^2 of exp(-t lambda_kl), truncated below tail_tol."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    tail_tol = get_tail_tolerance() if tail_tol is None else tail_tol
    budget = get_lattice_budget() if budget is None else budget

    cutoff = 30.0 / t
    while _heat_tail_bound(params, t, cutoff) >= tail_tol:
        cutoff *= 1.5
        if _ellipse_count_bound(params, cutoff) > budget:
            raise TruncationError(
                "torus_heat_trace",
                f"tail below {tail_tol:g} needs more than {budget} lattice points (eps={params.epsilon}, t={t})",
            )
    eigenvalues = torus_spectrum(params, cutoff, budget)
    logger.debug("torus_heat_trace: cutoff=%g with %d eigenvalues", cutoff, eigenvalues.size)
    # largest eigenvalues (smallest terms) first
    return float(np.sum(np.exp(-t * eigenvalues[::-1])))


def torus_heat_trace_prediction(
    t: float, epsilon: float, params: Optional[TorusFoliationParams] = None
) -> float:
    """Leading term of the heat trace as eps -> 0.

    Irrational slope gives 1/(4 pi t eps). A declared rational slope gives
    eps^-1 (4 pi t)^-1/2 sum_k L^-1 exp(-4 pi^2 k^2 t / L^2), the Laplace
    transform of the leafwise jumps.
    """
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    if params is None or not params.is_rational:
        return 1.0 / (4.0 * math.pi * t * epsilon)
    p, q_den = params.rational_form
    norm = math.hypot(p, q_den)
    # terms beyond exp(-40) are below double precision relative to k = 0
    k_max = int(math.ceil(norm / (2.0 * math.pi) * math.sqrt(40.0 / t)))
    ks = np.arange(k_max, -k_max - 1, -1, dtype=float)
    theta = float(np.sum(np.exp(-4.0 * math.pi**2 * ks**2 * t / norm**2))) / norm
    return theta / (epsilon * math.sqrt(4.0 * math.pi * t))


def torus_symbol_heat_trace(t: float, spec: Optional[QuadratureSpec] = None) -> tuple[float, float]:
    """Transverse symbol trace of exp(-t sigma(Delta_eps)) for irrational slope.

    Returns (closed form 1/2t, quadrature over T^2 x R of the leafwise
    diagonal heat kernel (4 pi t)^-1/2 times exp(-t p2^2)).
    """
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    spec = spec or get_default_quadrature_spec()
    diagonal = (4.0 * math.pi * t) ** -0.5
    by_quadrature = diagonal * integrate_line(lambda p2: math.exp(-t * p2 * p2), t, spec)
    return 1.0 / (2.0 * t), by_quadrature
