"""Python bindings for the zslice engine."""

from ._core import (
    Region,
    __version__,
    bracket_closed,
    build_phi_pi_fock,
    classify_region,
    kz_contour_numeric,
    lambda_of,
    momentum_propagator,
    omega,
    oracle_agreement,
    oracle_amplitudes,
    propagator,
    run_cli,
    run_suite,
)

__all__ = [
    "Region",
    "__version__",
    "bracket_closed",
    "build_phi_pi_fock",
    "classify_region",
    "kz_contour_numeric",
    "lambda_of",
    "momentum_propagator",
    "omega",
    "oracle_agreement",
    "oracle_amplitudes",
    "propagator",
    "run_cli",
    "run_suite",
]
