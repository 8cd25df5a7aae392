"""
Second-order mean-field (cumulant) equations: driven, coherence-free, and filter cavity.
"""

from ..core.data import FilterParams
from .closure import MomentForm, close_third_order, third_order
from .driven import DrivenEquations, driven_rhs
from .reduced import ReducedEquations, undriven_rhs, reduced_derivative
from .filter import (
    CascadedEquations,
    FilterSystem,
    filter_rhs,
    filter_steady_state,
    filter_photon_number,
    check_steady,
)

__all__ = [
    "FilterParams",
    "MomentForm",
    "close_third_order",
    "third_order",
    "DrivenEquations",
    "driven_rhs",
    "ReducedEquations",
    "undriven_rhs",
    "reduced_derivative",
    "CascadedEquations",
    "FilterSystem",
    "filter_rhs",
    "filter_steady_state",
    "filter_photon_number",
    "check_steady",
]
