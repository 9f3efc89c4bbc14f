"""Nonlocal rotating rod: critical curves, reduction, unfolding and post-buckling."""

from ._core import (
    ConvergenceError,
    DomainError,
    Error,
    InvalidInput,
    char_residual,
    default_grid,
    eta_prime,
    find_branch_minimum,
    find_fold,
    find_kappa_cr,
    lambda2_limit,
    lambda2_roots,
    mode_shape,
    postbuckle,
    reduce,
    run_acceptance,
    solve_lambda2,
    trace_curve,
    unfold,
)

__all__ = [name for name in dir() if not name.startswith("_")]
