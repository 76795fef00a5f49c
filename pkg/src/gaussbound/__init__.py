"""Upper and lower bounds on the error of discriminating two Gaussian states."""

from .bounds import (
    BoundReport,
    SGridConfig,
    bhattacharyya_bound,
    chernoff_bound,
    fidelity_bounds,
    fidelity_one_mode,
    full_report,
    m_s,
    minimize_over_s,
    minkowski_bound,
    pure_case_chernoff,
    q_bar_s,
    q_s,
    y_s,
    young_bound,
)
from .states import (
    GaussianState,
    coherent,
    displaced,
    overlap,
    power_cm,
    squeezed,
    symplectic_transform,
    thermal,
    two_mode_squeezed,
    vacuum,
)
from .symplectic import build_omega, random_symplectic, symplectic_spectrum, williamson

__version__ = "0.1.0"
