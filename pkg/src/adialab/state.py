import operator
from typing import Annotated, Literal, Optional

from typing_extensions import NotRequired, TypedDict

from adialab.types import Sample

Geometry = Literal["torus", "heisenberg", "sol", "weyl-ref"]
Mode = Literal["counting", "heat", "symbol", "compare", "mismatch"]

# "lambda" is a keyword, hence the functional form.
ExperimentConfig = TypedDict(
    "ExperimentConfig",
    {
        "name": str,
        "geometry": Geometry,
        "mode": Mode,
        "alpha": float,
        "alpha_name": Optional[str],
        "rational": Optional[list[int]],
        "a": float,
        "mu": float,
        "matrix": list[int],
        "q_codim": int,
        "eps": list[float],
        "t": list[float],
        "lambda": list[float],
        "omega": list[float],
        "tolerance": Optional[float],
        "mismatch_margin": float,
        "potential": str,
        "amplitude": float,
        "n_points": int,
        "out_csv": Optional[str],
        "out_json": Optional[str],
        "report": Optional[str],
    },
    total=False,
)


class CheckResult(TypedDict):
    """One comparison of an observed value against its prediction.

    Ratio checks pass when |ratio - 1| <= tolerance; bound checks pass when
    ratio < tolerance, the tolerance column then holding the bound.
    """

    name: str
    geometry: str
    mode: str
    kind: Literal["ratio", "bound"]
    alpha: Optional[float]
    rational_p: Optional[int]
    rational_q: Optional[int]
    epsilon: Optional[float]
    t: Optional[float]
    lam: Optional[float]
    observed: float
    predicted: float
    ratio: float
    tolerance: float
    passed: bool
    provenance: str
    cell: int
    seq: int


class FitRecord(TypedDict):
    name: str
    coefficient: float
    exponent: float
    residual: float
    n_points: int


class Cell(TypedDict):
    """One point of the experiment grid; unused axes are None."""

    index: int
    epsilon: Optional[float]
    t: Optional[float]
    lam: Optional[float]
    omega: Optional[float]


class CellState(TypedDict):
    config: ExperimentConfig
    cell: Cell


class ExperimentState(TypedDict):
    config: ExperimentConfig
    cells: NotRequired[list[Cell]]
    checks: Annotated[list[CheckResult], operator.add]
    samples: Annotated[list[Sample], operator.add]
    failures: Annotated[list[str], operator.add]
    fits: NotRequired[list[FitRecord]]
    results: NotRequired[list[CheckResult]]
    verdict: NotRequired[str]
