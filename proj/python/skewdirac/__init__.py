"""Forward and inverse spectral problems for skew-self-adjoint Dirac systems."""

from ._skewdirac import (
    Error,
    beta_from_system,
    classify_admissible,
    fundamental_solution,
    parse_taylor,
    random_beta,
    recover_potential,
    solve_inverse,
    system_from_beta,
    taylor_from_beta,
    taylor_from_system,
    to_json_taylor,
    weyl_continuous,
    weyl_function,
)

__all__ = [
    "Error",
    "beta_from_system",
    "classify_admissible",
    "fundamental_solution",
    "parse_taylor",
    "random_beta",
    "recover_potential",
    "solve_inverse",
    "system_from_beta",
    "taylor_from_beta",
    "taylor_from_system",
    "to_json_taylor",
    "weyl_continuous",
    "weyl_function",
]
