"""
Independent high-precision oracles for the quadrature constants.

Each oracle evaluates its integral with mpmath twice, by tanh-sinh and by
Gauss-Legendre quadrature, and refuses to answer unless the two agree to
1e-10 relative. `write_golden` stores the values with their provenance.
"""

import json
import logging
from typing import Callable, Optional

import mpmath

from adialab.errors import ConvergenceError

logger = logging.getLogger(__name__)

DEFAULT_DPS = 30
AGREEMENT_TOL = 1e-10


def _dual_scheme(
    integrand: Callable, points: list, operation: str, dps: int, alternative: Optional[tuple[Callable, list]] = None
) -> float:
    """Tanh-sinh on (integrand, points) against Gauss-Legendre on `alternative`, which defaults to the same integral."""
    second_integrand, second_points = alternative or (integrand, points)
    with mpmath.workdps(dps):
        first = mpmath.quad(integrand, points, method="tanh-sinh")
        second = mpmath.quad(second_integrand, second_points, method="gauss-legendre")
        spread = abs(first - second) / abs(first)
        logger.debug("%s: tanh-sinh %s, gauss-legendre %s", operation, first, second)
        if spread > AGREEMENT_TOL:
            raise ConvergenceError(operation, f"schemes disagree by {float(spread):.3g}", estimates=(float(first), float(second)))
        return float(first)


def _gaussian_window(t) -> list:
    # exp(-t eta^2) < 1e-43 outside
    radius = mpmath.sqrt(mpmath.mpf(100) / t)
    return [-radius, 0, radius]


def heisenberg_reduced_oracle(t: float, dps: int = DEFAULT_DPS) -> float:
    """(1/2) int eta / sinh(t eta) exp(-t eta^2) d eta."""
    with mpmath.workdps(dps):
        tt = mpmath.mpf(t)

        def integrand(eta):
            if eta == 0:
                return 1 / tt
            return eta / mpmath.sinh(tt * eta) * mpmath.exp(-tt * eta**2)

        return 0.5 * _dual_scheme(integrand, _gaussian_window(tt), "heisenberg_reduced_oracle", dps)


def sol_symbol_trace_oracle(alpha: float, t: float, dps: int = DEFAULT_DPS) -> float:
    """(1/2) int beta eta / sinh(beta t eta) exp(-t eta^2) d eta, beta = 2 alpha / (1 + alpha^2)."""
    with mpmath.workdps(dps):
        tt = mpmath.mpf(t)
        beta = 2 * mpmath.mpf(alpha) / (1 + mpmath.mpf(alpha) ** 2)

        def integrand(eta):
            if eta == 0 or beta == 0:
                return mpmath.exp(-tt * eta**2) / tt
            return beta * eta / mpmath.sinh(beta * tt * eta) * mpmath.exp(-tt * eta**2)

        return 0.5 * _dual_scheme(integrand, _gaussian_window(tt), "sol_symbol_trace_oracle", dps)


def mathieu_phase_area_oracle(a: float, mu: float, lam: float, dps: int = DEFAULT_DPS) -> float:
    """2 int (lam - a cosh(2 mu x))_+^(1/2) dx over the classically allowed interval."""
    with mpmath.workdps(dps):
        aa, mm, ll = mpmath.mpf(a), mpmath.mpf(mu), mpmath.mpf(lam)
        if ll <= aa:
            return 0.0
        x0 = mpmath.acosh(ll / aa) / (2 * mm)

        def integrand(x):
            return 2 * mpmath.sqrt(max(ll - aa * mpmath.cosh(2 * mm * x), 0))

        # x = x0 sin(theta) removes the square-root endpoints for Gauss-Legendre
        def smooth(theta):
            return integrand(x0 * mpmath.sin(theta)) * x0 * mpmath.cos(theta)

        half_pi = mpmath.pi / 2
        return _dual_scheme(
            integrand, [-x0, 0, x0], "mathieu_phase_area_oracle", dps, alternative=(smooth, [-half_pi, 0, half_pi])
        )


def golden_values(dps: int = DEFAULT_DPS) -> dict:
    """Oracle constants with the parameters and scheme that produced them."""
    provenance = f"mpmath {mpmath.__version__}, dps={dps}, tanh-sinh and gauss-legendre agreeing to {AGREEMENT_TOL:g}"
    entries = {
        "heisenberg_symbol_trace_reduced": (heisenberg_reduced_oracle, {"t": 1.0}),
        "sol_symbol_trace_alpha_half": (sol_symbol_trace_oracle, {"alpha": 0.5, "t": 1.0}),
        "sol_symbol_trace_alpha_one": (sol_symbol_trace_oracle, {"alpha": 1.0, "t": 1.0}),
        "mathieu_phase_area_lambda_2": (mathieu_phase_area_oracle, {"a": 1.0, "mu": 1.0, "lam": 2.0}),
        "mathieu_phase_area_lambda_5": (mathieu_phase_area_oracle, {"a": 1.0, "mu": 1.0, "lam": 5.0}),
    }
    return {
        name: {"value": oracle(**params, dps=dps), "parameters": params, "oracle": oracle.__name__, "provenance": provenance}
        for name, (oracle, params) in entries.items()
    }


def write_golden(path: str, dps: int = DEFAULT_DPS) -> dict:
    from adialab.report import write_text

    values = golden_values(dps)
    write_text(path, json.dumps(values, indent=2) + "\n")
    logger.info("wrote %d golden values to %s", len(values), path)
    return values
