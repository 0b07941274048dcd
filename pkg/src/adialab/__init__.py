from adialab.config import get_default_quadrature_spec, get_lattice_budget, get_tail_tolerance
from adialab.errors import (
    AdialabError,
    ConfigError,
    ConvergenceError,
    LatticeBudgetError,
    MatrixValidationError,
    ParameterError,
    TruncationError,
    TruncationSensitivityError,
)
from adialab.types import AsymptoticFit, Discretization1D, LeafwiseCountingFunction, QuadratureSpec

# The graph and CLI import the foliation modules, which import this package,
# so they are loaded on first use rather than here.
def __getattr__(name):
    if name in ("create_experiment_graph", "run_experiment"):
        from adialab import graph

        return getattr(graph, name)
    if name == "parse_config":
        from adialab.experiment import parse_config

        return parse_config
    raise AttributeError(f"module 'adialab' has no attribute {name!r}")


__version__ = "0.1.0"
