import os
from dotenv import load_dotenv

from adialab.types import QuadratureSpec

# Load environment variables from .env file
load_dotenv()

DEFAULT_REL_TOL = 1e-11
DEFAULT_ABS_TOL = 1e-13
DEFAULT_MAX_REFINEMENTS = 6
DEFAULT_LATTICE_BUDGET = 10**8
DEFAULT_TAIL_TOL = 1e-12


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


def get_default_quadrature_spec() -> QuadratureSpec:
    """Get the quadrature tolerances shared by every integral in the laboratory.

    Values come from ADIALAB_REL_TOL, ADIALAB_ABS_TOL and
    ADIALAB_MAX_REFINEMENTS when set, otherwise from the module defaults.
    """
    return QuadratureSpec(
        rel_tol=_env_float("ADIALAB_REL_TOL", DEFAULT_REL_TOL),
        abs_tol=_env_float("ADIALAB_ABS_TOL", DEFAULT_ABS_TOL),
        max_refinements=int(_env_float("ADIALAB_MAX_REFINEMENTS", DEFAULT_MAX_REFINEMENTS)),
    )


def get_lattice_budget() -> int:
    """Maximum number of lattice points an enumeration may visit."""
    return int(_env_float("ADIALAB_LATTICE_BUDGET", DEFAULT_LATTICE_BUDGET))


def get_tail_tolerance() -> float:
    return _env_float("ADIALAB_TAIL_TOL", DEFAULT_TAIL_TOL)


def get_output_dir() -> str:
    return os.getenv("ADIALAB_OUTPUT_DIR", ".")
