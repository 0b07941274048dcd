"""
Foliation models for the adiabatic-limit laboratory.

Each module covers one geometry: the semiclassical reference models, linear
foliations of the torus, the Heisenberg nilmanifold and Sol manifolds.
"""

from .semiclassical_reference import (
    CircleSchrodingerModel,
    ProductSchrodingerModel,
    named_potential,
    circle_schrodinger_eigs,
    circle_schrodinger_count,
    circle_heat_trace,
    weyl_phase_area_1d,
    weyl_check_1d,
    weyl_heat_check_1d,
    product_lhs_trace,
    operator_symbol_trace,
    adiabatic_counting_from_leafwise,
)
from .torus_foliation import (
    TorusFoliationParams,
    torus_eigenvalue,
    torus_counting,
    torus_spectrum,
    torus_counting_prediction,
    torus_leafwise_counting,
    torus_heat_trace,
    torus_heat_trace_prediction,
    torus_symbol_heat_trace,
    nc_weyl_prediction,
)
from .heisenberg_foliation import (
    HeisenbergParams,
    MehlerParams,
    mehler_kernel,
    oscillator_heat_trace,
    mehler_diagonal_trace,
    heisenberg_diagonal_kernel,
    heisenberg_symbol_trace_2d,
    heisenberg_symbol_trace_reduced,
    heisenberg_trace_rhs,
    heisenberg_trace_prediction,
    heisenberg_consistency_report,
)
from .sol_foliation import (
    SolParams,
    MathieuModel,
    sol_matrix_validate,
    mathieu_discretization,
    mathieu_eigs,
    mathieu_count,
    mathieu_phase_area,
    mathieu_phase_area_derivative,
    mathieu_weyl_check,
    sol_counting_prediction,
    sol_counting_laplace_transform,
    sol_symbol_trace,
    sol_actual_trace_prediction,
    sol_riemannian_trace_prediction,
    sol_nc_weyl_prediction,
    sol_mismatch_ratio,
)

__all__ = [
    # Semiclassical reference
    "CircleSchrodingerModel",
    "ProductSchrodingerModel",
    "named_potential",
    "circle_schrodinger_eigs",
    "circle_schrodinger_count",
    "circle_heat_trace",
    "weyl_phase_area_1d",
    "weyl_check_1d",
    "weyl_heat_check_1d",
    "product_lhs_trace",
    "operator_symbol_trace",
    "adiabatic_counting_from_leafwise",
    # Torus
    "TorusFoliationParams",
    "torus_eigenvalue",
    "torus_counting",
    "torus_spectrum",
    "torus_counting_prediction",
    "torus_leafwise_counting",
    "torus_heat_trace",
    "torus_heat_trace_prediction",
    "torus_symbol_heat_trace",
    "nc_weyl_prediction",
    # Heisenberg
    "HeisenbergParams",
    "MehlerParams",
    "mehler_kernel",
    "oscillator_heat_trace",
    "mehler_diagonal_trace",
    "heisenberg_diagonal_kernel",
    "heisenberg_symbol_trace_2d",
    "heisenberg_symbol_trace_reduced",
    "heisenberg_trace_rhs",
    "heisenberg_trace_prediction",
    "heisenberg_consistency_report",
    # Sol
    "SolParams",
    "MathieuModel",
    "sol_matrix_validate",
    "mathieu_discretization",
    "mathieu_eigs",
    "mathieu_count",
    "mathieu_phase_area",
    "mathieu_phase_area_derivative",
    "mathieu_weyl_check",
    "sol_counting_prediction",
    "sol_counting_laplace_transform",
    "sol_symbol_trace",
    "sol_actual_trace_prediction",
    "sol_riemannian_trace_prediction",
    "sol_nc_weyl_prediction",
    "sol_mismatch_ratio",
]
