"""
Pseudo-Dicke numbers of the g-B and g-D sub-transitions.

For identical atoms and a transition g <-> s,
    M_s = N (<A_ss> - <A_gg>) / 2,
    J_s^2 = 3N/4 + N(N-1) [<A_gs A'_sg> + <z z'>/4],  z = A_ss - A_gg.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..core.data import DickePoint, Layout, MomentState
from ..core.errors import LayoutError, SolverError
from ..core.layout import B, D, G, unpack_driven, unpack_reduced

logger = logging.getLogger(__name__)

# Tolerated negative J^2, relative to N^2
J2_TOL = 1e-9


def _pair(rho2: np.ndarray, a: int, b: int, c: int, d: int) -> complex:
    """<A_ab A'_cd> from the two-atom density matrix."""
    return rho2[3 * b + d, 3 * a + c]


def _reduced_terms(values: np.ndarray) -> tuple[dict[int, tuple[float, float, float]], float]:
    m = unpack_reduced(values)
    out = {}
    for i, s in enumerate((B, D)):
        p_ss = float(m.p[i, i].real)
        z = p_ss - m.p_gg
        # coherence-free closure: <z z'> factorizes
        out[s] = (p_ss, float(m.c[i, i].real), z * z)
    return out, m.p_gg


def _driven_terms(values: np.ndarray) -> tuple[dict[int, tuple[float, float, float]], float]:
    m = unpack_driven(values)
    rho1, rho2 = m.rho1, m.rho2
    out = {}
    for s in (B, D):
        p_ss = float(rho1[s, s].real)
        exchange = float(_pair(rho2, G, s, s, G).real)
        zz = (
            _pair(rho2, s, s, s, s) - _pair(rho2, s, s, G, G)
            - _pair(rho2, G, G, s, s) + _pair(rho2, G, G, G, G)
        )
        out[s] = (p_ss, exchange, float(zz.real))
    return out, float(rho1[G, G].real)


def collective_numbers(n_atoms: float, p_ss: float, p_gg: float, exchange: float, zz: float) -> tuple[float, float]:
    """(J, M) of one sub-transition."""
    N = float(n_atoms)
    M = 0.5 * N * (p_ss - p_gg)
    j2 = 0.75 * N + N * (N - 1.0) * (exchange + 0.25 * zz)
    if j2 < 0:
        if j2 < -J2_TOL * max(N * N, 1.0):
            raise SolverError(f"J^2 = {j2:.6g} < 0: pair correlations inconsistent with populations")
        j2 = 0.0
    return math.sqrt(j2), M


def dicke_numbers(steady: MomentState, n_atoms: float, eta_over_gamma: float = float("nan")) -> DickePoint:
    """(J_B, M_B, J_D, M_D) from reduced16 or driven-layout moments.

    Reduced states use the factorized <z z'> = (<A_ss> - <A_gg>)^2; driven
    states (including exact-oracle moments) take it from the pair block.
    """
    if steady.layout == Layout.REDUCED:
        terms, p_gg = _reduced_terms(steady.values)
    elif steady.layout == Layout.DRIVEN:
        terms, p_gg = _driven_terms(steady.values)
    else:
        raise LayoutError(f"dicke numbers need a reduced16 or driven102 state, got {steady.layout.value}")
    J_B, M_B = collective_numbers(n_atoms, terms[B][0], p_gg, terms[B][1], terms[B][2])
    J_D, M_D = collective_numbers(n_atoms, terms[D][0], p_gg, terms[D][1], terms[D][2])
    logger.debug("dicke: J_B=%.6g M_B=%.6g J_D=%.6g M_D=%.6g", J_B, M_B, J_D, M_D)
    return DickePoint(eta_over_gamma=eta_over_gamma, J_B=J_B, M_B=M_B, J_D=J_D, M_D=M_D)
