"""Gaussian quantum protocols between uniformly accelerated observers."""
__version__ = "0.1.0"

from .channel import AlphaCurve, accelerated_tmsv, alpha_at, apply_channel, build_channel, compute_alpha_curve
from .gaussian import GaussianState, log_negativity, partial_transpose, symplectic_eigenvalues, tmsv_state, vacuum
from .modes import ModeParameters, Resolution, compute_overlaps, wedge_overlaps
from .protocols import (
    dense_coding_mutual_information,
    optimized_fidelity,
    optimized_mutual_information,
    teleportation_fidelity,
)
