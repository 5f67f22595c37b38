"""Inference for the lagged cross-covariance of functional time series.

Curve panels are T x R float64 arrays: one row per curve, columns are the
values on the uniform grid t_j = j/R. See the individual docstrings for the
conventions of each call.
"""

from ._core import (
    ConformabilityError,
    DegenerateSpectrumError,
    ParseError,
    changepoint,
    chisq_p_pvalue,
    cidr,
    cross_covariance,
    default_bandwidth,
    sim_kiefer,
    sim_sup_weighted_bridges,
    sim_weighted_chisq,
    simulate_pair,
    spectrum_eigenvalues,
    test_cross_cov,
)

__version__ = "0.1.0"

__all__ = [
    "ConformabilityError",
    "DegenerateSpectrumError",
    "ParseError",
    "changepoint",
    "chisq_p_pvalue",
    "cidr",
    "cross_covariance",
    "default_bandwidth",
    "sim_kiefer",
    "sim_sup_weighted_bridges",
    "sim_weighted_chisq",
    "simulate_pair",
    "spectrum_eigenvalues",
    "test_cross_cov",
]
