"""Oscillatory integrals I(lambda, nu) and the multidimensional van der Corput bound."""

from ._core import (
    CorputError,
    ProblemInstance,
    analyze,
    catalog,
    catalog_names,
    eval_phase,
    fit_power_law,
    ibp_evaluate_I2,
    ibp_terms,
    integrate,
    lambda_sweep,
    radial_derivative,
    sphere_grid,
    split_I1_I2,
    sublevel_fit,
    sublevel_measure,
    taylor_coefficients,
    theta_cutoff,
)

__all__ = [
    "CorputError",
    "ProblemInstance",
    "analyze",
    "catalog",
    "catalog_names",
    "eval_phase",
    "fit_power_law",
    "ibp_evaluate_I2",
    "ibp_terms",
    "integrate",
    "lambda_sweep",
    "radial_derivative",
    "sphere_grid",
    "split_I1_I2",
    "sublevel_fit",
    "sublevel_measure",
    "taylor_coefficients",
    "theta_cutoff",
]
