"""Hermitian positive definite solutions of ``X - A^* X^{-p} A = Q``.

Solver, solvability checks, perturbation bounds, backward-error bounds and
condition numbers, plus reproductions of four reference numerical examples.
"""

from .backward import (
    BackwardErrorReport,
    backward_error_theta,
    legacy_nu_star,
    power_difference_bound,
)
from .conditioning import (
    ConditionParams,
    ConditionReport,
    assemble_condition_blocks,
    condition_number,
    condition_number_real,
    fd_condition_estimate,
    fd_probe_direction,
)
from .linalg import (
    Hpd,
    NotPositiveDefiniteError,
    RegimeError,
    SingularOperatorError,
    eigh,
    fractional_power,
    frechet_fractional_power,
    kron,
    loewner_kernel,
    norms,
    unvec,
    vec,
    vec_permutation,
)
from .operators import (
    OperatorAssembly,
    build_operator,
    inv_operator_norm,
    op_P_norm,
    quadrature_oracle,
)
from .perturbation import PerturbationReport, PerturbationScalars, bound_mu_star, bound_rho
from .solver import (
    EquationSpec,
    ExistenceBounds,
    SolveReport,
    alpha_beta_bounds,
    check_contraction_condition,
    check_uniqueness_condition,
    residual,
    solve_fixed_point,
)

__version__ = "0.1.0"
