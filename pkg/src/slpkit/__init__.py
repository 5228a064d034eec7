"""Spectra, discontinuity sets, and eigenvalue-branch tracing for
self-adjoint discrete Sturm-Liouville problems."""

from .charts import (
    CHART_IDS,
    ChartCoordinates,
    Coupled,
    Separated,
    canonical_form,
    chart_matrix,
    coupled_matrix,
    covering_charts,
    normalize_to_chart,
    row_span_distance,
    separated_matrix,
)
from .discontinuity import (
    BCSideClassification,
    EquationSideClassification,
    ProductSideClassification,
    classify_bc_side,
    classify_equation_side,
    classify_product,
    xi_of,
)
from .model import (
    BoundaryCondition,
    Equation,
    Problem,
    validate_bc,
    validate_equation,
)
from .oracles import (
    gamma_by_interpolation,
    gamma_value,
    pencil_eigenvalues_separated,
    tridiagonal_eigenvalues,
)
from .spectra import (
    FundamentalSolutions,
    Polynomial,
    Spectrum,
    c_matrix,
    char_poly,
    count_case,
    count_eigenvalues,
    eigenvalues,
    fundamental_solutions,
    leading_coefficients,
    rank_r,
    theta,
)
from .tolerances import TOL, Tolerances, apply_overrides
from .tracing import (
    ASYMPTOTIC_FIXTURES,
    BranchTrace,
    Family,
    JumpClassification,
    MonotonicityReport,
    SingularEvent,
    chart_affine_family,
    chart_axis_family,
    check_monotonicity,
    classify_jump,
    constant_family,
    coupled_axis_family,
    equation_affine_family,
    equation_axis_family,
    separated_angle_family,
    trace,
    verify_asymptotic_theorem,
)
from . import errors, fixtures

__all__ = [
    "ASYMPTOTIC_FIXTURES",
    "BCSideClassification",
    "BoundaryCondition",
    "BranchTrace",
    "CHART_IDS",
    "ChartCoordinates",
    "Coupled",
    "Equation",
    "EquationSideClassification",
    "Family",
    "FundamentalSolutions",
    "JumpClassification",
    "MonotonicityReport",
    "Polynomial",
    "Problem",
    "ProductSideClassification",
    "Separated",
    "SingularEvent",
    "Spectrum",
    "TOL",
    "Tolerances",
    "apply_overrides",
    "c_matrix",
    "canonical_form",
    "char_poly",
    "chart_affine_family",
    "chart_axis_family",
    "chart_matrix",
    "check_monotonicity",
    "classify_bc_side",
    "classify_equation_side",
    "classify_jump",
    "classify_product",
    "constant_family",
    "count_case",
    "count_eigenvalues",
    "coupled_axis_family",
    "coupled_matrix",
    "covering_charts",
    "eigenvalues",
    "equation_affine_family",
    "equation_axis_family",
    "errors",
    "fixtures",
    "fundamental_solutions",
    "gamma_by_interpolation",
    "gamma_value",
    "leading_coefficients",
    "normalize_to_chart",
    "pencil_eigenvalues_separated",
    "rank_r",
    "row_span_distance",
    "separated_angle_family",
    "separated_matrix",
    "theta",
    "trace",
    "tridiagonal_eigenvalues",
    "validate_bc",
    "validate_equation",
    "verify_asymptotic_theorem",
    "xi_of",
]
