"""Anti-plane lattice crack lab."""

from ._core import (
    __version__,
    calibrate_c2,
    convergence_study,
    g_hat0,
    g_hat1_s,
    g_hom_diff,
    green_column,
    predictor,
    sites_in_ball,
    solve,
)

__all__ = [
    "__version__",
    "calibrate_c2",
    "convergence_study",
    "g_hat0",
    "g_hat1_s",
    "g_hom_diff",
    "green_column",
    "predictor",
    "sites_in_ball",
    "solve",
]
