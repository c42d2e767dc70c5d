"""Finite-state mean-field particle systems.

Thin re-export of the compiled core: model factories, the exact N-particle
simulator, the macroscopic flow integrator, fixed-point search with stability
classification, the backoff-chain macro analysis, and the convergence tests
relating all of them.
"""

from meanfield._core import (
    Model,
    __version__,
    cross_check,
    decoupling_test,
    detect_limit_cycle,
    find_fixed_points,
    integrate,
    level4_marginal_test,
    lln_test,
    simulate,
    sis_model,
    tv_distance,
    wlan_gamma,
    wlan_model,
)

__all__ = [
    "Model",
    "__version__",
    "cross_check",
    "decoupling_test",
    "detect_limit_cycle",
    "find_fixed_points",
    "integrate",
    "level4_marginal_test",
    "lln_test",
    "simulate",
    "sis_model",
    "tv_distance",
    "wlan_gamma",
    "wlan_model",
]
