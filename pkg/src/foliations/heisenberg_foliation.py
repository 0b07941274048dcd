"""
The Heisenberg nilmanifold foliated by the invariant flow X = (1, alpha, 0).

The leafwise principal symbol is a family of harmonic oscillators, so its
heat kernel comes from the Mehler formula. This module evaluates that
kernel in a form that is stable for large and small frequencies, builds
the diagonal symbol kernel k_t(p2, p3), and computes the symbol trace
three ways (2D quadrature, reduced line integral, explicit prefactor form)
so that they can be checked against each other.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from typing_extensions import TypedDict

from adialab.config import get_default_quadrature_spec
from adialab.errors import ParameterError
from adialab.numerics import integrate_line, integrate_plane
from adialab.types import QuadratureSpec
from foliations.torus_foliation import nc_weyl_prediction

logger = logging.getLogger(__name__)

# Below this argument the removable singularities are evaluated by series.
SERIES_CUTOFF = 1e-4
CONSISTENCY_TOL = 1e-7


###########################
# Removable singularities
###########################


def log_sinh(x: float) -> float:
    """log sinh x for x > 0 without overflow."""
    if not x > 0:
        raise ParameterError(f"log_sinh needs x > 0, got {x}")
    return x + math.log(-math.expm1(-2.0 * x)) - math.log(2.0)


def x_over_sinh(x: float) -> float:
    x = abs(x)
    if x < SERIES_CUTOFF:
        x2 = x * x
        return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    return math.exp(math.log(x) - log_sinh(x))


def x_over_tanh(x: float) -> float:
    x = abs(x)
    if x < SERIES_CUTOFF:
        x2 = x * x
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0
    return x / math.tanh(x)


def tanh_over_x(x: float) -> float:
    x = abs(x)
    if x < SERIES_CUTOFF:
        x2 = x * x
        return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0
    return math.tanh(x) / x


###########################
# Parameters
###########################


@dataclass(frozen=True)
class HeisenbergParams:
    alpha: float
    t: float
    epsilon: float

    def __post_init__(self):
        if not self.t > 0:
            raise ParameterError(f"t must be positive, got {self.t}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True)
class MehlerParams:
    """Oscillator -d^2/dx^2 + omega^2 x^2 at time t; every formula is even in omega."""

    omega: float
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ParameterError(f"t must be positive, got {self.t}")


class HeisenbergConsistencyReport(TypedDict):
    t: float
    epsilon: float
    trace_2d: float
    trace_reduced: float
    rhs_scaled: float
    max_discrepancy: float
    passed: bool


###########################
# Mehler kernel
###########################


def mehler_kernel(params: MehlerParams, x: float, y: float) -> float:
    """Heat kernel of the harmonic oscillator.

    With z = 2|omega|t the kernel is

        (4 pi t)^-1/2 (z/sinh z)^1/2 exp(-[(z/tanh z)(x^2 + y^2) - 2 (z/sinh z) x y] / 4t),

    which reduces to the free kernel at omega = 0 and never forms sinh z or
    cosh z on their own.
    """
    t = params.t
    z = 2.0 * abs(params.omega) * t
    g_sinh = x_over_sinh(z)
    g_tanh = x_over_tanh(z)
    exponent = -(g_tanh * (x * x + y * y) - 2.0 * g_sinh * x * y) / (4.0 * t)
    if z > SERIES_CUTOFF:
        log_prefactor = -0.5 * math.log(4.0 * math.pi * t) + 0.5 * (math.log(z) - log_sinh(z))
        return math.exp(log_prefactor + exponent)
    return (4.0 * math.pi * t) ** -0.5 * math.sqrt(g_sinh) * math.exp(exponent)


def oscillator_heat_trace(params: MehlerParams, n_max: Optional[int] = None) -> float:
    """sum_{n=0}^{n_max} exp(-(2n+1)|omega| t); equals 1/(2 sinh |omega| t).

    When n_max is omitted the series is cut where the geometric tail drops
    below 1e-14.
    """
    if params.omega == 0:
        raise ParameterError("oscillator trace diverges at omega = 0")
    rate = abs(params.omega) * params.t
    if n_max is None:
        # tail after n_max: exp(-(2 n_max + 3) rate) / (1 - exp(-2 rate))
        log_tail_floor = math.log(1e-14) + math.log(-math.expm1(-2.0 * rate))
        n_max = max(0, math.ceil((-log_tail_floor / rate - 3.0) / 2.0))
    n = np.arange(n_max, -1, -1, dtype=float)
    return float(np.sum(np.exp(-(2.0 * n + 1.0) * rate)))


def mehler_diagonal_trace(params: MehlerParams, spec: Optional[QuadratureSpec] = None) -> float:
    """Integral of mehler_kernel(x, x) over the line."""
    if params.omega == 0:
        raise ParameterError("oscillator trace diverges at omega = 0")
    spec = spec or get_default_quadrature_spec()
    # diagonal decays like exp(-|omega| tanh(|omega| t) x^2)
    rate = abs(params.omega) * math.tanh(abs(params.omega) * params.t)
    return integrate_line(lambda x: mehler_kernel(params, x, x), rate, spec)


###########################
# Symbol kernel and traces
###########################


def heisenberg_diagonal_kernel(t: float, p2: float, p3: float) -> float:
    """k_t(p2, p3): the Mehler kernel at x = y = -p2/p3, omega = p3, times exp(-p3^2 t)."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    z = 2.0 * abs(p3) * t
    exponent = -p3 * p3 * t - t * p2 * p2 * tanh_over_x(p3 * t)
    if z > SERIES_CUTOFF:
        log_prefactor = -0.5 * math.log(4.0 * math.pi * t) + 0.5 * (math.log(z) - log_sinh(z))
        return math.exp(log_prefactor + exponent)
    return (4.0 * math.pi * t) ** -0.5 * math.sqrt(x_over_sinh(z)) * math.exp(exponent)


def heisenberg_symbol_trace_2d(t: float, spec: Optional[QuadratureSpec] = None) -> float:
    """Integral of k_t over (p2, p3); the compact (u, v, w) factor has unit volume."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    spec = spec or get_default_quadrature_spec()
    return integrate_plane(
        lambda p2, p3: heisenberg_diagonal_kernel(t, p2, p3),
        t,
        spec,
        inner_decay=lambda p3: t * tanh_over_x(p3 * t),
    )


def _heisenberg_line_integral(t: float, spec: QuadratureSpec) -> float:
    """I(t) = int eta / sinh(t eta) exp(-t eta^2) d eta, equal to 1/t at eta = 0."""
    return integrate_line(lambda eta: x_over_sinh(t * eta) * math.exp(-t * eta * eta) / t, t, spec)


def heisenberg_symbol_trace_reduced(t: float, spec: Optional[QuadratureSpec] = None) -> float:
    """(1/2) int p3 / sinh(p3 t) exp(-p3^2 t) dp3, the 2D trace after the p2 integration."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    return 0.5 * _heisenberg_line_integral(t, spec or get_default_quadrature_spec())


def heisenberg_trace_rhs(t: float, epsilon: float, spec: Optional[QuadratureSpec] = None) -> float:
    """Explicit heat-trace asymptotics (8 pi^2 eps^2)^-1 I(t)."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    return _heisenberg_line_integral(t, spec or get_default_quadrature_spec()) / (8.0 * math.pi**2 * epsilon**2)


def heisenberg_trace_prediction(t: float, epsilon: float, spec: Optional[QuadratureSpec] = None) -> float:
    """Noncommutative Weyl prediction (2 pi eps)^-2 times the reduced symbol trace."""
    return nc_weyl_prediction(2, epsilon, heisenberg_symbol_trace_reduced(t, spec))


def heisenberg_consistency_report(
    t: float,
    epsilon: float,
    spec: Optional[QuadratureSpec] = None,
) -> HeisenbergConsistencyReport:
    """Compare the 2D trace, the reduced trace and (2 pi eps)^2 times the explicit form."""
    spec = spec or get_default_quadrature_spec()
    trace_2d = heisenberg_symbol_trace_2d(t, spec)
    trace_reduced = heisenberg_symbol_trace_reduced(t, spec)
    rhs_scaled = heisenberg_trace_rhs(t, epsilon, spec) * (2.0 * math.pi * epsilon) ** 2
    values = (trace_2d, trace_reduced, rhs_scaled)
    discrepancy = max(abs(a - b) / max(abs(a), abs(b)) for a in values for b in values)
    logger.info("heisenberg t=%g eps=%g: 2d=%.15g reduced=%.15g discrepancy=%.3g", t, epsilon, trace_2d, trace_reduced, discrepancy)
    return {
        "t": t,
        "epsilon": epsilon,
        "trace_2d": trace_2d,
        "trace_reduced": trace_reduced,
        "rhs_scaled": rhs_scaled,
        "max_discrepancy": discrepancy,
        "passed": discrepancy < CONSISTENCY_TOL,
    }
