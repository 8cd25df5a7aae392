"""
Predicted transmission lines from the dressed-state ladder.
"""

from __future__ import annotations

from ..core.data import Branch, PeakPrediction, PhysicalParams
from ..core.errors import ParameterError
from .levels import dressed_levels


def transition_group(upper: Branch, lower: Branch) -> int:
    """Classify an n -> n-1 transition.

    1: dark to dark or same-sign bright to bright
    2: dark to bright or bright to dark
    3: opposite-sign bright to bright
    """
    if upper == lower:
        return 1
    if Branch.ZERO in (upper, lower):
        return 2
    return 3


def transmission_peaks(p: PhysicalParams, max_n: int) -> list[PeakPrediction]:
    """Lines of the n = 0 triplet plus every n -> n-1 transition up to max_n.

    The triplet weights are the |G>|1> populations of the n = 0 dressed
    states; transitions between excited manifolds carry no weight.
    """
    if max_n < 0:
        raise ParameterError(f"max_n must be >= 0, got {max_n}")

    peaks = [
        PeakPrediction(frequency_offset=lvl.shift, weight=float(abs(lvl.amp_G) ** 2), group=0, n_photons=0)
        for lvl in dressed_levels(p, 0)
    ]
    lower = dressed_levels(p, 0)
    for n in range(1, max_n + 1):
        upper = dressed_levels(p, n)
        for u in upper:
            for lo in lower:
                peaks.append(PeakPrediction(
                    frequency_offset=u.shift - lo.shift,
                    weight=None,
                    group=transition_group(u.branch, lo.branch),
                    n_photons=n,
                ))
        lower = upper
    return peaks


def triplet_weights(p: PhysicalParams) -> tuple[float, float]:
    """Closed-form (center, each side) weights at resonance: Delta^2/(Delta^2+8Ng^2), 4Ng^2/(...)."""
    d2 = p.delta_zeeman ** 2
    c2 = 8.0 * p.n_atoms * p.g ** 2
    total = d2 + c2
    if total == 0:
        return 1.0, 0.0
    return d2 / total, 0.5 * c2 / total
