import math

from adialab.state import ExperimentConfig
from adialab.types import QuadratureSpec


def relative_error(actual: float, expected: float) -> float:
    return abs(actual - expected) / abs(expected)


def assert_close(actual: float, expected: float, rel: float):
    assert math.isfinite(actual), f"{actual} is not finite"
    assert relative_error(actual, expected) <= rel, f"{actual} vs {expected} (rel {relative_error(actual, expected):.3g} > {rel:g})"


def assert_all_experiment_qualities(graph):
    assert "plan" in graph.nodes
    assert "run_cell" in graph.nodes
    assert "fit" in graph.nodes
    assert "verdict" in graph.nodes


def assert_sorted_results(results):
    keys = [(c["cell"], c["seq"]) for c in results]
    assert keys == sorted(keys)


###########################
# Sample configurations
###########################

TIGHT_SPEC = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)

# cheap configs that exercise every branch of the runner without large eigensolves

TORUS_HEAT: ExperimentConfig = {
    "geometry": "torus",
    "mode": "heat",
    "alpha_name": "sqrt2",
    "eps": [0.04, 0.02],
    "t": [1.0],
}

SOL_MISMATCH: ExperimentConfig = {
    "geometry": "sol",
    "mode": "mismatch",
    "alpha": 1.0,
    "eps": [0.1],
    "t": [0.5, 1.0],
}

SOL_RIEMANNIAN: ExperimentConfig = {
    "geometry": "sol",
    "mode": "compare",
    "alpha": 0.0,
    "eps": [0.1],
    "t": [1.0],
}

LEAFWISE_COMPARE: ExperimentConfig = {
    "geometry": "weyl-ref",
    "mode": "compare",
    "lambda": [1.0, 10.0],
}

MEHLER_HEAT: ExperimentConfig = {
    "geometry": "heisenberg",
    "mode": "heat",
    "omega": [1.0],
    "t": [0.5, 1.0],
}
