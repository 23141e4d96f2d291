"""Orthonormal W-function systems phi_n = sqrt(w) p_n.

Weight families, orthonormal polynomial recurrences and Gauss rules,
W-function evaluation, skew-symmetric differentiation matrices with
separability diagnostics, linear-time structured matrix-vector products,
and a convergence-experiment harness with a CSV-emitting CLI.
"""

from .diffmatrix import (
    DivergentIntegralError,
    MatrixSection,
    SeparabilityReport,
    SeparableFactors,
    d2_entry_kernel,
    dense_diff_matrix_closed,
    dense_diff_matrix_quadrature,
    e_o_closed,
    e_o_recursion,
    iota,
    iota_check,
    matvec_factors,
    power_section,
    section_read_csv,
    section_sidecar,
    section_write_csv,
    separability_scan,
    separable_factors,
    ultraspherical_S,
)
from .expansion import (
    CoefficientVector,
    TEST_FUNCTIONS,
    TestFunction,
    diff_coefficients,
    error_report,
    error_report_to_csv,
    expand,
    partial_sum_eval,
    test_function,
)
from .families import (
    WeightFamily,
    generalized_hermite,
    index_lower_bound_ok,
    konoplev,
    laguerre,
    ultraspherical,
    weight_derivative,
    weight_eval,
)
from .fastops import (
    FastProductPlan,
    apply_power,
    fast_product_plan,
    matvec_separable,
    matvec_symmetric_separable,
)
from .orthopoly import (
    QuadratureError,
    QuadratureRule,
    RecurrenceCoeffs,
    eval_poly_sequence,
    gauss_rule,
    recurrence_coeffs,
)
from .wfunctions import (
    WFunctionBasis,
    eval_wfunction_derivative_sequence,
    eval_wfunction_log_sequence,
    eval_wfunction_second_derivative_sequence,
    eval_wfunction_sequence,
)

__version__ = "1.0.0"

__all__ = [
    "WeightFamily",
    "laguerre",
    "ultraspherical",
    "generalized_hermite",
    "konoplev",
    "weight_eval",
    "weight_derivative",
    "index_lower_bound_ok",
    "RecurrenceCoeffs",
    "QuadratureRule",
    "QuadratureError",
    "recurrence_coeffs",
    "eval_poly_sequence",
    "gauss_rule",
    "WFunctionBasis",
    "eval_wfunction_sequence",
    "eval_wfunction_derivative_sequence",
    "eval_wfunction_second_derivative_sequence",
    "eval_wfunction_log_sequence",
    "SeparableFactors",
    "MatrixSection",
    "SeparabilityReport",
    "DivergentIntegralError",
    "separable_factors",
    "matvec_factors",
    "dense_diff_matrix_closed",
    "dense_diff_matrix_quadrature",
    "d2_entry_kernel",
    "iota",
    "iota_check",
    "separability_scan",
    "power_section",
    "ultraspherical_S",
    "e_o_closed",
    "e_o_recursion",
    "section_write_csv",
    "section_read_csv",
    "section_sidecar",
    "FastProductPlan",
    "fast_product_plan",
    "matvec_separable",
    "matvec_symmetric_separable",
    "apply_power",
    "CoefficientVector",
    "TestFunction",
    "TEST_FUNCTIONS",
    "test_function",
    "expand",
    "partial_sum_eval",
    "diff_coefficients",
    "error_report",
    "error_report_to_csv",
    "__version__",
]
