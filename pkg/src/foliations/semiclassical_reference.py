"""
Semiclassical reference models for the Weyl checks.

This module contains the Schrodinger operator -h^2 d^2/dx^2 + V on the unit
circle, the separable product model Delta_X + eps^2 Delta_Y + V on the unit
2-torus, their phase-space Weyl predictions, and the evaluator that turns a
leafwise spectrum distribution function into the leading adiabatic count.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import gamma
from typing_extensions import TypedDict

from adialab.config import get_default_quadrature_spec, get_tail_tolerance
from adialab.errors import ParameterError, TruncationError
from adialab.numerics import (
    adaptive_quad,
    banded_sym_eigs,
    banded_sym_eigs_below,
    integrate_line,
    periodic_band,
    stieltjes_power_integral,
)
from adialab.types import Discretization1D, LeafwiseCountingFunction, QuadratureSpec

logger = logging.getLogger(__name__)

Potential = Callable[[np.ndarray], np.ndarray]

# Grid used to locate turning points and the potential minimum.
_SCAN_POINTS = 4096


def flat_potential(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def named_potential(name: str, amplitude: float = 1.0) -> Potential:
    """Potentials addressable from an experiment config: flat, cosine, constant."""
    if name == "flat":
        return flat_potential
    if name == "cosine":
        return lambda x: amplitude * np.cos(2.0 * np.pi * np.asarray(x, dtype=float))
    if name == "constant":
        return lambda x: amplitude + flat_potential(x)
    raise ParameterError(f"unknown potential {name!r}; expected flat, cosine or constant")


@dataclass(frozen=True)
class CircleSchrodingerModel:
    """-h^2 d^2/dx^2 + V(x) on the circle of circumference 1."""

    potential: Potential
    h: float

    def __post_init__(self):
        if not self.h > 0:
            raise ParameterError(f"semiclassical parameter h must be positive, got {self.h}")

    def potential_minimum(self) -> float:
        x = np.arange(_SCAN_POINTS) / _SCAN_POINTS
        return float(np.min(self.potential(x)))


@dataclass(frozen=True)
class ProductSchrodingerModel:
    """Delta_X + eps^2 Delta_Y + V1(x) + V2(y) on the unit 2-torus."""

    potential_x: Potential
    potential_y: Potential
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")

    def x_model(self) -> CircleSchrodingerModel:
        return CircleSchrodingerModel(self.potential_x, h=1.0)

    def y_model(self) -> CircleSchrodingerModel:
        return CircleSchrodingerModel(self.potential_y, h=self.epsilon)


class WeylCheckRow(TypedDict):
    h: float
    count: int
    prediction: float
    ratio: float


class WeylHeatRow(TypedDict):
    h: float
    trace: float
    prediction: float
    ratio: float


###########################
# Circle eigenvalues
###########################


def circle_hamiltonian(model: CircleSchrodingerModel, disc: Discretization1D) -> np.ndarray:
    """Second-order periodic finite-difference matrix of -h^2 d^2/dx^2 + V, in band storage."""
    if disc.boundary != "periodic":
        raise ParameterError("circle eigensolves need a periodic-unit-circle discretization")
    scale = (model.h / disc.spacing) ** 2
    diagonal = 2.0 * scale + model.potential(disc.nodes())
    return periodic_band(diagonal, np.full(disc.n_points, -scale))


def circle_schrodinger_eigs(model: CircleSchrodingerModel, disc: Discretization1D, k: int) -> np.ndarray:
    return banded_sym_eigs(circle_hamiltonian(model, disc), k)


def circle_schrodinger_count(model: CircleSchrodingerModel, disc: Discretization1D, lam: float) -> int:
    """Number of eigenvalues <= lam, with multiplicity."""
    return int(banded_sym_eigs_below(circle_hamiltonian(model, disc), lam).size)


def gaussian_tail_bound(a: float, j: int) -> float:
    """Upper bound for sum_{m >= j} exp(-a m^2)."""
    return math.exp(-a * j * j) / -math.expm1(-a * (2 * j + 1))


def circle_heat_trace(
    model: CircleSchrodingerModel,
    t: float,
    tail_tol: Optional[float] = None,
    disc: Optional[Discretization1D] = None,
) -> float:
    """sum_j exp(-t mu_j) over the circle spectrum, truncated by a Gaussian tail bound.

    By min-max, mu_(2j-1), mu_(2j) >= min V + (2 pi h j)^2, so the modes
    beyond |j| = J contribute at most 2 exp(-t min V) * tail(J + 1).
    """
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    tail_tol = get_tail_tolerance() if tail_tol is None else tail_tol
    disc = disc or Discretization1D.periodic(1000)
    a = t * (2.0 * math.pi * model.h) ** 2
    shift = math.exp(-t * model.potential_minimum())

    modes = 1
    while 2.0 * shift * gaussian_tail_bound(a, modes + 1) >= tail_tol:
        modes += 1
        if 2 * modes + 1 > disc.n_points:
            raise TruncationError(
                "circle_heat_trace",
                f"tail below {tail_tol:g} needs more than {disc.n_points} eigenvalues (h={model.h}, t={t})",
            )
    k = 2 * modes + 1
    logger.debug("circle_heat_trace: h=%g t=%g keeping %d eigenvalues", model.h, t, k)
    eigenvalues = circle_schrodinger_eigs(model, disc, k)
    return float(np.sum(np.exp(-t * eigenvalues[::-1])))


###########################
# Phase-space Weyl predictions
###########################


def _allowed_intervals(potential: Potential, lam: float) -> list[tuple[float, float]]:
    """Subintervals of [0, 1] where V(x) < lam, with turning points located by brentq."""
    x = np.linspace(0.0, 1.0, _SCAN_POINTS + 1)
    gap = lam - potential(x)
    inside = gap > 0
    if not np.any(inside):
        return []
    if np.all(inside):
        return [(0.0, 1.0)]

    def g(y: float) -> float:
        return float(lam - potential(np.asarray(y)))

    edges = [0.0] if inside[0] else []
    for i in np.nonzero(inside[:-1] != inside[1:])[0]:
        edges.append(brentq(g, x[i], x[i + 1], xtol=1e-15))
    if inside[-1]:
        edges.append(1.0)
    return list(zip(edges[0::2], edges[1::2]))


def weyl_phase_area_1d(
    model: CircleSchrodingerModel,
    lam: float,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """Area of {xi^2 + V(x) <= lam} in T*S^1, that is 2 * int (lam - V)_+^(1/2) dx."""
    spec = spec or get_default_quadrature_spec()

    def integrand(x: float) -> float:
        return 2.0 * math.sqrt(max(0.0, lam - float(model.potential(np.asarray(x)))))

    return float(
        sum(
            adaptive_quad(integrand, lo, hi, spec, operation="weyl_phase_area_1d")
            for lo, hi in _allowed_intervals(model.potential, lam)
        )
    )


def weyl_check_1d(
    model: CircleSchrodingerModel,
    lam: float,
    disc: Discretization1D,
    h_grid: Sequence[float],
    spec: Optional[QuadratureSpec] = None,
) -> list[WeylCheckRow]:
    """Compare N_h(lam) with (2 pi h)^-1 * phase area for each h in the grid.

    lam should avoid eigenvalue clusters; this is the caller's choice and
    is not checked.
    """
    area = weyl_phase_area_1d(model, lam, spec)
    rows: list[WeylCheckRow] = []
    for h in h_grid:
        count = circle_schrodinger_count(replace(model, h=h), disc, lam)
        prediction = area / (2.0 * math.pi * h)
        rows.append(
            {
                "h": float(h),
                "count": count,
                "prediction": prediction,
                "ratio": count / prediction if prediction > 0 else math.nan,
            }
        )
    return rows


def weyl_heat_check_1d(
    model: CircleSchrodingerModel,
    t: float,
    disc: Discretization1D,
    h_grid: Sequence[float],
    tail_tol: Optional[float] = None,
    spec: Optional[QuadratureSpec] = None,
) -> list[WeylHeatRow]:
    """Heat-trace form of the circle Weyl law: tr exp(-t H_h) against (2 pi h)^-1 sqrt(pi/t) int exp(-t V)."""
    spec = spec or get_default_quadrature_spec()
    boltzmann = adaptive_quad(
        lambda x: math.exp(-t * float(model.potential(np.asarray(x)))), 0.0, 1.0, spec, operation="weyl_heat_check_1d"
    )
    phase = math.sqrt(math.pi / t) * boltzmann
    rows: list[WeylHeatRow] = []
    for h in h_grid:
        trace = circle_heat_trace(replace(model, h=h), t, tail_tol, disc)
        prediction = phase / (2.0 * math.pi * h)
        rows.append({"h": float(h), "trace": trace, "prediction": prediction, "ratio": trace / prediction})
    return rows


###########################
# Product model
###########################


def product_lhs_trace(
    model: ProductSchrodingerModel,
    t: float,
    tail_tol: Optional[float] = None,
    disc_x: Optional[Discretization1D] = None,
    disc_y: Optional[Discretization1D] = None,
) -> float:
    """tr exp(-t H_eps) for a separable potential, as the product of two circle traces."""
    tail_tol = get_tail_tolerance() if tail_tol is None else tail_tol
    trace_x = circle_heat_trace(model.x_model(), t, tail_tol / 2.0, disc_x)
    trace_y = circle_heat_trace(model.y_model(), t, tail_tol / 2.0, disc_y)
    return trace_x * trace_y


def operator_symbol_trace(
    model: ProductSchrodingerModel,
    t: float,
    spec: Optional[QuadratureSpec] = None,
    disc_x: Optional[Discretization1D] = None,
    tail_tol: Optional[float] = None,
) -> float:
    """Phase-space integral over T*Y of tr exp(-t sigma(H_eps)(y, eta)).

    The operator-valued symbol is eta^2 + (-d^2/dx^2 + V1) + V2(y), so the
    trace factorizes into the X heat trace, a Gaussian in eta and a
    Boltzmann factor in y. The result does not depend on eps.
    """
    spec = spec or get_default_quadrature_spec()
    trace_x = circle_heat_trace(model.x_model(), t, tail_tol, disc_x)
    gaussian = integrate_line(lambda eta: math.exp(-t * eta * eta), t, spec)
    boltzmann = adaptive_quad(
        lambda y: math.exp(-t * float(model.potential_y(np.asarray(y)))),
        0.0,
        1.0,
        spec,
        operation="operator_symbol_trace",
    )
    return trace_x * gaussian * boltzmann


###########################
# Leafwise counting
###########################


def adiabatic_counting_from_leafwise(counting: LeafwiseCountingFunction, q: int, lam: float) -> float:
    """Leading coefficient of eps^q N_eps(lam) for a Riemannian foliation of codimension q."""
    prefactor = (4.0 * math.pi) ** (-q / 2.0) / gamma(q / 2.0 + 1.0)
    return float(prefactor * stieltjes_power_integral(counting, q, lam))
