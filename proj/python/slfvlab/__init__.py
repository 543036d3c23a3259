"""Thin Python layer over the mSLFV C++ core (_slfvlab pybind11 module)."""

try:
    from ._slfvlab import (
        ModelParams,
        align_prediction,
        build_theta,
        matrix_exponential,
        params,
        qv_formula,
        simulate_identity,
        simulate_profile,
        steady_state,
        suggest_n_max,
        validate_assumptions,
        version,
    )
except ImportError:  # in-tree runs: module sits on sys.path next to build products
    from _slfvlab import (
        ModelParams,
        align_prediction,
        build_theta,
        matrix_exponential,
        params,
        qv_formula,
        simulate_identity,
        simulate_profile,
        steady_state,
        suggest_n_max,
        validate_assumptions,
        version,
    )

__version__ = version()

__all__ = [
    "ModelParams",
    "align_prediction",
    "build_theta",
    "matrix_exponential",
    "params",
    "qv_formula",
    "simulate_identity",
    "simulate_profile",
    "steady_state",
    "suggest_n_max",
    "validate_assumptions",
    "version",
    "__version__",
]
