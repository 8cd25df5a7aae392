"""
Dressed states of the atom-cavity block Hamiltonian and predicted transmission lines.
"""

from .levels import hamiltonian_block, dressed_levels, cubic_shifts, eigen_shifts, block_coupling
from .peaks import transmission_peaks, transition_group, triplet_weights

__all__ = [
    "hamiltonian_block",
    "dressed_levels",
    "cubic_shifts",
    "eigen_shifts",
    "block_coupling",
    "transmission_peaks",
    "transition_group",
    "triplet_weights",
]
