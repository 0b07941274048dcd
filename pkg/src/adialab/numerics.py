"""
Numerical kernels shared by the geometry modules.

This module contains the quadrature over the line and the plane, the
symmetric eigensolvers, the log-log power-law fit and the Stieltjes
integral used by the leafwise counting formula. Every function is a pure
function of its arguments.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eig_banded, eigh, eigh_tridiagonal
from scipy.special import gammaln

from adialab.errors import ConvergenceError, ParameterError
from adialab.types import AsymptoticFit, LeafwiseCountingFunction, QuadratureSpec

logger = logging.getLogger(__name__)

# QUADPACK subdivision limit for the first attempt; doubled on each refinement.
_INITIAL_LIMIT = 50
# Dense solves are O(n^3); periodic grids go through periodic_band and banded_sym_eigs instead.
MAX_DENSE_SIZE = 4000
SYMMETRY_TOL = 1e-12


def _default_spec(spec: Optional[QuadratureSpec]) -> QuadratureSpec:
    if spec is not None:
        return spec
    from adialab.config import get_default_quadrature_spec

    return get_default_quadrature_spec()


def adaptive_quad(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec,
    operation: str = "quadrature",
) -> float:
    """Integrate f over [a, b], doubling the subdivision limit until QUADPACK converges.

    A result flagged by QUADPACK is still accepted when its own error
    estimate is within ten times the requested tolerance (roundoff floor).
    """
    limit = _INITIAL_LIMIT
    previous = math.nan
    value = math.nan
    message = ""
    for attempt in range(spec.max_refinements):
        out = quad(f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=limit, full_output=1)
        value, abserr = float(out[0]), float(out[1])
        if len(out) == 3:
            return value
        message = out[3]
        if abserr <= 10.0 * spec.tolerance_for(value):
            logger.debug("%s: accepted at roundoff floor (err=%.3g) on [%g, %g]", operation, abserr, a, b)
            return value
        logger.debug(
            "%s: refinement %d with limit %d did not converge (err=%.3g)", operation, attempt + 1, limit, abserr
        )
        previous = value
        limit *= 2
    raise ConvergenceError(
        operation,
        f"no convergence after {spec.max_refinements} refinements: {message.splitlines()[0] if message else ''}",
        estimates=(previous, value),
    )


def integrate_line(
    f: Callable[[float], float],
    t: float,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """Integrate f over the real line, f having a Gaussian envelope exp(-t eta^2).

    The line is truncated at spec.truncation_radius(t); the
    integrand must already be finite everywhere (removable singularities
    patched by the caller).
    """
    spec = _default_spec(spec)
    radius = spec.truncation_radius(t)
    return adaptive_quad(f, -radius, radius, spec, operation="integrate_line")


def integrate_plane(
    f: Callable[[float, float], float],
    t: float,
    spec: Optional[QuadratureSpec] = None,
    inner_decay: Union[float, Callable[[float], float], None] = None,
) -> float:
    """Integrate f(u, v) over the plane as an iterated integral, u inner and v outer.

    `t` is the decay rate along v. `inner_decay` is the decay rate along u,
    either a constant or a function of v; it defaults to `t`.
    """
    spec = _default_spec(spec)
    outer_radius = spec.truncation_radius(t)

    def inner_rate(v: float) -> float:
        if inner_decay is None:
            return t
        if callable(inner_decay):
            return inner_decay(v)
        return inner_decay

    def inner(v: float) -> float:
        radius = spec.truncation_radius(inner_rate(v))
        return adaptive_quad(
            lambda u: f(u, v), -radius, radius, spec, operation="integrate_plane[inner axis u]"
        )

    return adaptive_quad(inner, -outer_radius, outer_radius, spec, operation="integrate_plane[outer axis v]")


###########################
# Eigensolvers
###########################


def _tridiagonal_arrays(diag: Sequence[float], offdiag: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    if d.ndim != 1 or d.size == 0:
        raise ParameterError("diag must be a nonempty vector")
    if e.shape != (d.size - 1,):
        raise ParameterError(f"offdiag must have length {d.size - 1}, got {e.size}")
    return d, e


def _gershgorin_lower(d: np.ndarray, e: np.ndarray) -> float:
    radius = np.zeros_like(d)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    return float(np.min(d - radius)) - 1.0


def sym_tridiag_eigs(diag: Sequence[float], offdiag: Sequence[float], k: int) -> np.ndarray:
    """k smallest eigenvalues of a symmetric tridiagonal matrix, ascending.

    Uses LAPACK bisection on Sturm sequence counts (stebz), so only the
    requested eigenvalues are computed.
    """
    d, e = _tridiagonal_arrays(diag, offdiag)
    n = d.size
    if not 1 <= k <= n:
        raise ParameterError(f"k must satisfy 1 <= k <= {n}, got {k}")
    if n == 1:
        return d.copy()
    return eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, k - 1))


def sym_tridiag_eigs_below(diag: Sequence[float], offdiag: Sequence[float], upper: float) -> np.ndarray:
    """All eigenvalues <= upper of a symmetric tridiagonal matrix, ascending."""
    d, e = _tridiagonal_arrays(diag, offdiag)
    if d.size == 1:
        return d[d <= upper].copy()
    lower = _gershgorin_lower(d, e)
    if upper <= lower:
        return np.empty(0)
    return eigh_tridiagonal(d, e, eigvals_only=True, select="v", select_range=(lower, upper))


def periodic_band(diag: Sequence[float], coupling: Sequence[float]) -> np.ndarray:
    """Lower band storage of a periodic symmetric tridiagonal matrix.

    coupling[j] joins nodes j and (j + 1) mod n. Nodes are reordered as
    0, n-1, 1, n-2, ... so the wrap-around entry sits next to the diagonal
    and the permuted matrix has bandwidth 2.
    """
    d = np.asarray(diag, dtype=float)
    c = np.asarray(coupling, dtype=float)
    n = d.size
    if n < 3 or c.size != n:
        raise ParameterError(f"periodic matrix needs n >= 3 and n couplings, got n={n}, {c.size} couplings")
    j = np.arange(n)
    half = (n + 1) // 2
    position = np.where(j < half, 2 * j, 2 * (n - 1 - j) + 1)
    band = np.zeros((3, n))
    band[0, position] = d
    p, q = position, position[(j + 1) % n]
    lo, hi = np.minimum(p, q), np.maximum(p, q)
    np.add.at(band, (hi - lo, lo), c)
    return band


def _band_gershgorin_lower(band: np.ndarray) -> float:
    n = band.shape[1]
    radius = np.zeros(n)
    for offset in range(1, band.shape[0]):
        row = np.abs(band[offset, : n - offset])
        radius[:-offset] += row
        radius[offset:] += row
    return float(np.min(band[0] - radius)) - 1.0


def banded_sym_eigs(band: np.ndarray, k: int) -> np.ndarray:
    """k smallest eigenvalues of a symmetric band matrix in lower storage, ascending."""
    n = band.shape[1]
    if not 1 <= k <= n:
        raise ParameterError(f"k must satisfy 1 <= k <= {n}, got {k}")
    return eig_banded(band, lower=True, eigvals_only=True, select="i", select_range=(0, k - 1))


def banded_sym_eigs_below(band: np.ndarray, upper: float) -> np.ndarray:
    """All eigenvalues <= upper of a symmetric band matrix in lower storage, ascending."""
    lower = _band_gershgorin_lower(band)
    if upper <= lower:
        return np.empty(0)
    return eig_banded(band, lower=True, eigvals_only=True, select="v", select_range=(lower, upper))


def _check_dense(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError(f"matrix must be square, got shape {m.shape}")
    if m.shape[0] > MAX_DENSE_SIZE:
        raise ParameterError(f"matrix size {m.shape[0]} exceeds {MAX_DENSE_SIZE}")
    scale = max(1.0, float(np.max(np.abs(m))))
    asymmetry = float(np.max(np.abs(m - m.T)))
    if asymmetry > SYMMETRY_TOL * scale:
        raise ParameterError(f"matrix is not symmetric (max |A - A^T| = {asymmetry:.3g})")
    return m


def dense_sym_eigs(matrix, k: int) -> np.ndarray:
    """k smallest eigenvalues of a dense symmetric matrix, ascending."""
    m = _check_dense(matrix)
    n = m.shape[0]
    if not 1 <= k <= n:
        raise ParameterError(f"k must satisfy 1 <= k <= {n}, got {k}")
    return eigh(m, eigvals_only=True, subset_by_index=[0, k - 1])


def dense_sym_eigs_below(matrix, upper: float) -> np.ndarray:
    """All eigenvalues <= upper of a dense symmetric matrix, ascending."""
    m = _check_dense(matrix)
    off = np.sum(np.abs(m), axis=1) - np.abs(np.diag(m))
    lower = float(np.min(np.diag(m) - off)) - 1.0
    if upper <= lower:
        return np.empty(0)
    return eigh(m, eigvals_only=True, subset_by_value=(lower, upper))


###########################
# Fits and Stieltjes integrals
###########################


def fit_power_law(samples: Sequence[tuple[float, float]]) -> AsymptoticFit:
    """Least-squares fit of log y = log c - gamma * log eps."""
    if len(samples) < 2:
        raise ParameterError(f"need at least 2 samples, got {len(samples)}")
    eps = np.array([s[0] for s in samples], dtype=float)
    y = np.array([s[1] for s in samples], dtype=float)
    if np.any(eps <= 0):
        raise ParameterError("epsilon values must be positive")
    if np.any(y <= 0):
        raise ParameterError("sample values must be positive for a log-log fit")
    if np.unique(eps).size != eps.size:
        raise ParameterError("epsilon values must be distinct")

    design = np.column_stack([np.ones_like(eps), -np.log(eps)])
    (log_c, gamma), *_ = np.linalg.lstsq(design, np.log(y), rcond=None)
    deviation = np.log(y) - design @ np.array([log_c, gamma])
    residual = float(np.sqrt(np.mean(deviation**2)))
    return AsymptoticFit(
        coefficient=float(np.exp(log_c)),
        exponent=float(gamma),
        residual=residual,
        n_points=int(eps.size),
    )


def stieltjes_power_integral(counting: LeafwiseCountingFunction, q: int, lam: float) -> float:
    """Integral of (lam - tau)^(q/2) against d N_F(tau) over tau <= lam."""
    if int(q) != q or q < 1:
        raise ParameterError(f"q must be a positive integer, got {q}")
    if lam <= 0:
        return 0.0
    half_q = q / 2.0
    if counting.kind == "power":
        s = counting.exponent
        # c * s * B(q/2 + 1, s) * lam^(q/2 + s), written to stay finite at s = 0
        log_ratio = gammaln(half_q + 1.0) + gammaln(s + 1.0) - gammaln(half_q + s + 1.0)
        return counting.coefficient * lam ** (half_q + s) * math.exp(log_ratio)

    if lam > counting.support_max:
        raise ParameterError(f"N_F is only tabulated up to {counting.support_max}, asked for lambda={lam}")
    locations = np.asarray(counting.locations, dtype=float)
    sizes = np.asarray(counting.sizes, dtype=float)
    below = locations <= lam
    return float(np.sum(sizes[below] * (lam - locations[below]) ** half_q))
