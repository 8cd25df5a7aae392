"""
Time integration and steady-state solving for moment and density-matrix equations.
"""

from .integrate import Trajectory, integrate, output_times
from .steady import SteadyState, steady_state, newton_polish, fd_jacobian, is_stable, relative_residual

__all__ = [
    "Trajectory",
    "integrate",
    "output_times",
    "SteadyState",
    "steady_state",
    "newton_polish",
    "fd_jacobian",
    "is_stable",
    "relative_residual",
]
