"""Value types shared by the numerical kernels and the geometry modules."""

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np
from typing_extensions import TypedDict

from adialab.errors import ParameterError


def gaussian_truncation_radius(t: float, abs_tol: float) -> float:
    """Smallest R with exp(-t R^2) < abs_tol / 10, never below 8 / sqrt(t)."""
    if t <= 0:
        raise ParameterError(f"decay rate must be positive, got {t}")
    tail = math.sqrt(math.log(10.0 / abs_tol) / t)
    return max(tail, 8.0 / math.sqrt(t))


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-13
    max_refinements: int = 6
    truncation_radius_policy: Callable[[float, float], float] = field(
        default=gaussian_truncation_radius, compare=False, repr=False
    )

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ParameterError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise ParameterError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_refinements < 1:
            raise ParameterError(f"max_refinements must be at least 1, got {self.max_refinements}")

    def truncation_radius(self, t: float) -> float:
        return self.truncation_radius_policy(t, self.abs_tol)

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class AsymptoticFit:
    """Leading-order model y ~ coefficient * eps^(-exponent)."""

    coefficient: float
    exponent: float
    residual: float
    n_points: int

    def predict(self, epsilon: float) -> float:
        return self.coefficient * epsilon ** (-self.exponent)


@dataclass(frozen=True)
class Discretization1D:
    """Grid for a 1D Schrodinger eigensolve.

    Dirichlet grids have n_points interior nodes on [-L, L]; periodic grids
    have n_points nodes on the unit circle and ignore half_width.
    """

    n_points: int
    boundary: Literal["dirichlet", "periodic"] = "periodic"
    half_width: float = 1.0

    def __post_init__(self):
        if self.n_points < 3:
            raise ParameterError(f"n_points must be at least 3, got {self.n_points}")
        if self.boundary not in ("dirichlet", "periodic"):
            raise ParameterError(f"unknown boundary {self.boundary!r}")
        if self.boundary == "dirichlet" and not self.half_width > 0:
            raise ParameterError(f"half_width must be positive, got {self.half_width}")

    @classmethod
    def periodic(cls, n_points: int) -> "Discretization1D":
        return cls(n_points=n_points, boundary="periodic")

    @classmethod
    def dirichlet(cls, half_width: float, n_points: int) -> "Discretization1D":
        return cls(n_points=n_points, boundary="dirichlet", half_width=half_width)

    @property
    def spacing(self) -> float:
        if self.boundary == "dirichlet":
            return 2.0 * self.half_width / (self.n_points + 1)
        return 1.0 / self.n_points

    def nodes(self) -> np.ndarray:
        if self.boundary == "dirichlet":
            return -self.half_width + self.spacing * np.arange(1, self.n_points + 1)
        return self.spacing * np.arange(self.n_points)


@dataclass(frozen=True)
class LeafwiseCountingFunction:
    """Spectrum distribution function N_F of a leafwise Laplacian.

    Either a closed-form power law c * tau^s on tau >= 0, or a list of jumps
    (location, size). Jump lists are only known up to `support_max`.
    """

    kind: Literal["power", "jumps"]
    coefficient: float = 0.0
    exponent: float = 0.0
    locations: tuple[float, ...] = ()
    sizes: tuple[float, ...] = ()
    support_max: float = math.inf

    def __post_init__(self):
        if self.kind == "power":
            if not self.coefficient > 0:
                raise ParameterError(f"power-law coefficient must be positive, got {self.coefficient}")
            if self.exponent < 0:
                raise ParameterError(f"power-law exponent must be nonnegative, got {self.exponent}")
        elif self.kind == "jumps":
            if len(self.locations) != len(self.sizes):
                raise ParameterError("jump locations and sizes differ in length")
            if any(loc < 0 for loc in self.locations):
                raise ParameterError("N_F vanishes on the negative axis; jump locations must be >= 0")
            if any(b < a for a, b in zip(self.locations, self.locations[1:])):
                raise ParameterError("jump locations must be sorted")
            if any(size <= 0 for size in self.sizes):
                raise ParameterError("jump sizes must be positive")
        else:
            raise ParameterError(f"unknown counting function kind {self.kind!r}")

    @classmethod
    def power_law(cls, coefficient: float, exponent: float) -> "LeafwiseCountingFunction":
        return cls(kind="power", coefficient=coefficient, exponent=exponent)

    @classmethod
    def from_jumps(
        cls,
        locations: Sequence[float],
        sizes: Sequence[float],
        support_max: Optional[float] = None,
    ) -> "LeafwiseCountingFunction":
        order = np.argsort(np.asarray(locations, dtype=float), kind="stable")
        locs = tuple(float(locations[i]) for i in order)
        jumps = tuple(float(sizes[i]) for i in order)
        return cls(
            kind="jumps",
            locations=locs,
            sizes=jumps,
            support_max=math.inf if support_max is None else float(support_max),
        )

    def __call__(self, tau: float) -> float:
        if tau < 0:
            return 0.0
        if self.kind == "power":
            return self.coefficient * tau**self.exponent
        if tau > self.support_max:
            raise ParameterError(f"N_F is only tabulated up to {self.support_max}, asked for {tau}")
        locs = np.asarray(self.locations)
        return float(np.sum(np.asarray(self.sizes)[locs <= tau]))


class Sample(TypedDict):
    """One observation of a counting function or heat trace."""

    series: str
    kind: Literal["counting", "heat"]
    epsilon: float
    parameter: float
    value: float
