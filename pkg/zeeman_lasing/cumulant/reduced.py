"""
Coherence-free mean-field equations (undriven, <a> = <A_gr> = 0).

Written in the frame of the cavity carrier. Index r runs over the excited
levels (0 = B, 1 = D) and rb is the other one.
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np

from ..core.data import REDUCED_SIZE, Layout, MomentState, PhysicalParams, validate_params
from ..core.errors import LayoutError
from ..core.layout import ReducedMoments, pack_reduced, unpack_reduced

logger = logging.getLogger(__name__)

OTHER = (1, 0)


class ReducedEquations:
    """Right-hand side of the coherence-free system."""

    layout = Layout.REDUCED

    def __init__(self, p: PhysicalParams):
        validate_params(p)
        self.p = p
        self.size = REDUCED_SIZE
        self.evaluations = 0

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.rhs(t, y)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        if y.shape != (self.size,):
            raise LayoutError(f"reduced16 vector needs {self.size} values, got shape {y.shape}")
        self.evaluations += 1
        return reduced_derivative(self.p, unpack_reduced(y))


def reduced_derivative(p: PhysicalParams, m: ReducedMoments) -> np.ndarray:
    N = p.n_atoms
    Gc = p.bright_coupling
    kappa = p.kappa
    gp, gm = p.decay_plus, p.decay_minus
    lp, lm = p.pump_plus, p.pump_minus
    w = p.atom_cavity_detuning
    half = 0.5 * p.delta_zeeman
    n, y, P, pgg, C = m

    d_n = -kappa * n - 2.0 * Gc * N * y[0].imag

    d_y = np.zeros(2, dtype=complex)
    for r in (0, 1):
        rb = OTHER[r]
        bright = 1.0 if r == 0 else 0.0
        d_y[r] = (
            (1j * w - 0.5 * kappa - lp - 0.5 * gp) * y[r]
            + (1j * half - 0.5 * gm) * y[rb]
            - 1j * Gc * (N - 1) * C[0, r]
            + 1j * Gc * (bright * n * pgg - (n + 1.0) * P[r, 0])
        )

    d_P = np.zeros((2, 2), dtype=complex)
    d_C = np.zeros((2, 2), dtype=complex)
    for r in (0, 1):
        rb = OTHER[r]
        br = 1.0 if r == 0 else 0.0
        for rp in (0, 1):
            rpb = OTHER[rp]
            brp = 1.0 if rp == 0 else 0.0
            same = 1.0 if r == rp else 0.0
            cross = 1.0 if rp == rb else 0.0
            d_P[r, rp] = (
                (1j * half - 0.5 * gm) * P[rb, rp]
                - (1j * half + 0.5 * gm) * P[r, rpb]
                - gp * P[r, rp]
                - 1j * Gc * (brp * y[r] - br * np.conj(y[rp]))
                + (lp * same + lm * cross) * pgg
            )
            d_C[r, rp] = (
                -(gp + 2.0 * lp) * C[r, rp]
                - (1j * half + 0.5 * gm) * C[rb, rp]
                + (1j * half - 0.5 * gm) * C[r, rpb]
                - 1j * Gc * (br * pgg - P[0, r]) * y[rp]
                - 1j * Gc * np.conj(y[r]) * (P[rp, 0] - brp * pgg)
            )

    d_pgg = (
        -2.0 * Gc * y[0].imag
        + 2.0 * gm * P[0, 1].real
        + gp * (P[0, 0].real + P[1, 1].real)
        - 2.0 * lp * pgg
    )
    return pack_reduced(ReducedMoments(d_n, d_y, d_P, d_pgg, d_C))


@lru_cache(maxsize=32)
def _equations(p: PhysicalParams) -> ReducedEquations:
    return ReducedEquations(p)


def undriven_rhs(p: PhysicalParams, s: MomentState) -> MomentState:
    """d/dt of a reduced16 state."""
    s.expect(Layout.REDUCED)
    return MomentState(Layout.REDUCED, _equations(p).rhs(0.0, s.values))
