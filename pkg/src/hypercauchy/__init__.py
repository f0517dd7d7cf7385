"""Reproducing Cauchy kernels for first-order conditions on real algebras."""
from __future__ import annotations

from .algebra import (
    AlgebraError,
    AlgebraTable,
    AlgElem,
    Singular,
    ball_volume,
    builtin,
    cayley_dickson,
    check_associative,
    check_commutative,
    load_algebra,
    mul,
    save_algebra,
    sum_of_basis_squares,
    try_invert,
    validate_unit,
)
from .admissibility import (
    AdmissibilityError,
    AdmissibilityReport,
    CRConditionSet,
    IllConditioned,
    KernelSolution,
    a_differentiable_conditions,
    anticommuting_single_condition,
    check_ellipticity,
    commutative_condition_A,
    induced_conditions,
    load_conditions,
    save_conditions,
    solve_admissibility,
)
from .kernel import (
    CauchyKernel,
    OnDiagonal,
    closedness_residual,
    kernel_field,
    kernel_field_batch,
    phi,
)
from .solutions import (
    NAMED_SOLUTIONS,
    AlgPolynomial,
    PolySolutionBasis,
    apply_cr_operator,
    named_solution,
    polynomial_solution_basis,
)
from .varcoef import (
    VarCRConditionSet,
    pointwise_admissibility,
    validate_affine,
)
from .verify import (
    BallDomain,
    DerivativeReport,
    PointOutsideDomain,
    QuadratureSpec,
    QuadratureUnderResolved,
    ReproductionReport,
    boundary_reproduce,
    derivative_via_kernel,
    sphere_quadrature,
    verify_representation,
)
from .suites import SUITE_NAMES, SuiteResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "AdmissibilityReport",
    "AlgebraError",
    "AlgebraTable",
    "AlgElem",
    "AlgPolynomial",
    "BallDomain",
    "CauchyKernel",
    "CRConditionSet",
    "DerivativeReport",
    "IllConditioned",
    "KernelSolution",
    "NAMED_SOLUTIONS",
    "OnDiagonal",
    "PointOutsideDomain",
    "PolySolutionBasis",
    "QuadratureSpec",
    "QuadratureUnderResolved",
    "ReproductionReport",
    "SUITE_NAMES",
    "Singular",
    "SuiteResult",
    "VarCRConditionSet",
    "a_differentiable_conditions",
    "anticommuting_single_condition",
    "apply_cr_operator",
    "ball_volume",
    "boundary_reproduce",
    "builtin",
    "cayley_dickson",
    "check_associative",
    "check_commutative",
    "check_ellipticity",
    "closedness_residual",
    "commutative_condition_A",
    "derivative_via_kernel",
    "induced_conditions",
    "kernel_field",
    "kernel_field_batch",
    "load_algebra",
    "load_conditions",
    "mul",
    "named_solution",
    "phi",
    "pointwise_admissibility",
    "polynomial_solution_basis",
    "run_suite",
    "save_algebra",
    "save_conditions",
    "solve_admissibility",
    "sphere_quadrature",
    "sum_of_basis_squares",
    "try_invert",
    "validate_affine",
    "validate_unit",
    "verify_representation",
]
