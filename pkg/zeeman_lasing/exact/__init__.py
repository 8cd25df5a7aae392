"""
Exact small-N master-equation oracle.
"""

from .oracle import DensityState, ExactSystem, build_generator, destroy, MAX_ATOMS, MAX_PHOTONS
from .moments import exact_moments, exact_reduced_moments, partial_trace

__all__ = [
    "DensityState",
    "ExactSystem",
    "build_generator",
    "destroy",
    "MAX_ATOMS",
    "MAX_PHOTONS",
    "exact_moments",
    "exact_reduced_moments",
    "partial_trace",
]
