"""
Lasing linewidth from steady-state moments.

Both estimates rest on the same relation: the filter-field coherence
decays at Gamma/2 with Gamma = kappa/2 + Im Z(Gamma), where Z collects the
collective atomic response at the cavity frequency. Dropping Gamma inside
Z gives the closed form; keeping it gives an equation solved numerically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ..core.data import Layout, LinewidthEstimate, MomentState, PhysicalParams
from ..core.errors import ParameterError, SpectrumError
from ..core.layout import unpack_reduced

logger = logging.getLogger(__name__)

FORMS = ("main", "general")
SCAN_POINTS = 400


@dataclass(frozen=True)
class SteadyInputs:
    """Steady moments that enter the linewidth."""
    inversion: float
    coherence: complex

    @property
    def im_coherence(self) -> float:
        return float(self.coherence.imag)


def steady_inputs(steady: MomentState) -> SteadyInputs:
    """<A_BB> - <A_gg> and <A_DB> of a reduced16 state."""
    steady.expect(Layout.REDUCED)
    m = unpack_reduced(steady.values)
    return SteadyInputs(inversion=float(m.p[0, 0].real - m.p_gg), coherence=complex(m.p[1, 0]))


def _require_balanced(p: PhysicalParams) -> None:
    if abs(p.pump_minus) > 1e-12 * max(1.0, abs(p.pump_plus)):
        raise ParameterError(
            f"linewidth formula needs balanced pumping (eta_plus = eta_minus); Lambda_- = {p.pump_minus:.6g}"
        )


def linewidth_semianalytic(p: PhysicalParams, steady: MomentState, form: str = "main") -> LinewidthEstimate:
    """Closed-form linewidth.

    "main" is written with gamma and eta,
        Gamma = {kappa - theta[(gamma + 2 eta) X - Delta Im<A_DB>]} / (2 + theta X),
        theta = 8 N g^2 / [(gamma + 2 eta)^2 + Delta^2],
    and "general" with the combined rates,
        Gamma = {kappa - theta'[(2 Lambda_+ + Gamma_+) X - Delta Im<A_DB>]} / (2 + theta' X),
        theta' = 2 N g^2 / [(Lambda_+ + Gamma_+/2)^2 + Delta^2/4],
    where X = <A_BB> - <A_gg>. For balanced rates the two coincide.
    """
    if form not in FORMS:
        raise ParameterError(f"unknown linewidth form {form!r}; expected one of {', '.join(FORMS)}")
    _require_balanced(p)
    s = steady_inputs(steady)
    X = s.inversion
    delta = p.delta_zeeman
    ng2 = p.n_atoms * p.g ** 2
    if form == "main":
        gamma = p.decay_plus
        eta = p.pump_plus
        rate = gamma + 2.0 * eta
        theta = 8.0 * ng2 / (rate ** 2 + delta ** 2)
    else:
        rate = 2.0 * p.pump_plus + p.decay_plus
        theta = 2.0 * ng2 / ((p.pump_plus + 0.5 * p.decay_plus) ** 2 + 0.25 * delta ** 2)
    numerator = p.kappa - theta * (rate * X - delta * s.im_coherence)
    denominator = 2.0 + theta * X
    if abs(denominator) < 1e-12:
        raise ParameterError("linewidth denominator 2 + theta X vanishes")
    value = numerator / denominator
    valid = denominator > 0
    if not valid:
        logger.warning("linewidth denominator %.3e <= 0: outside the formula's validity", denominator)
    logger.debug("semi-analytic linewidth (%s): %.6g rad/ms, X=%.4g, Im<A_DB>=%.4g", form, value, X, s.im_coherence)
    return LinewidthEstimate(value=float(value), width=float(abs(value)), valid=valid)


def im_z(p: PhysicalParams, s: SteadyInputs, gamma_lw: float) -> float:
    """Im Z(Gamma) for the filter tuned to the atomic and cavity frequency."""
    S = p.pump_plus + 0.5 * p.decay_plus
    half_delta = 0.5 * p.delta_zeeman
    a = 0.5 * gamma_lw + S
    k = 2.0 * p.n_atoms * p.g ** 2 / (a * a + half_delta ** 2)
    z = -1j * k * (1j * half_delta * s.coherence + a * s.inversion)
    return float(z.imag)


@dataclass(frozen=True)
class ImplicitLinewidth:
    value: float
    width: float
    bracket: tuple[float, float]
    iterations: int
    residual: float
    converged: bool


def _brackets(f, grid: np.ndarray) -> list[tuple[float, float]]:
    vals = np.array([f(x) for x in grid])
    out = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            out.append((grid[i], grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            out.append((grid[i], grid[i + 1]))
    return out


def _root(f, bracket: tuple[float, float]) -> tuple[float, int]:
    lo, hi = bracket
    if lo == hi:
        return lo, 0
    root, info = brentq(f, lo, hi, xtol=1e-14 * max(abs(lo), abs(hi), 1e-300), rtol=1e-14, full_output=True)
    return float(root), int(info.iterations)


def linewidth_implicit(p: PhysicalParams, steady: MomentState, guess: Optional[float] = None) -> ImplicitLinewidth:
    """Solve Gamma = kappa/2 + Im Z(Gamma).

    Roots are bracketed on a logarithmic grid over (0, kappa] and the
    smallest positive one is polished with Brent's method. When no positive
    root exists the search continues over [-min(kappa, Lambda_+ + Gamma_+/2), 0)
    and the root of smallest magnitude is returned; width is its magnitude.
    `guess` only reorders candidate brackets by distance to it.
    """
    _require_balanced(p)
    if p.kappa <= 0:
        raise ParameterError("implicit linewidth needs kappa > 0")
    s = steady_inputs(steady)
    f = lambda x: x - 0.5 * p.kappa - im_z(p, s, x)

    positive = np.geomspace(p.kappa * 1e-12, p.kappa, SCAN_POINTS)
    brackets = _brackets(f, positive)
    if not brackets:
        S = p.pump_plus + 0.5 * p.decay_plus
        reach = min(p.kappa, S)
        negative = -np.geomspace(reach * (1 - 1e-9), reach * 1e-12, SCAN_POINTS)
        brackets = sorted(_brackets(f, negative), key=lambda b: -b[1])
    if not brackets:
        raise SpectrumError("implicit linewidth: no fixed point in (0, kappa] or the negative search range")
    if guess is not None:
        brackets = sorted(brackets, key=lambda b: abs(0.5 * (b[0] + b[1]) - guess))
    root, its = _root(f, brackets[0])
    residual = abs(f(root))
    converged = residual <= 1e-9 * p.kappa
    if not converged:
        logger.warning("implicit linewidth residual %.3e", residual)
    logger.debug("implicit linewidth %.6g rad/ms after %d Brent iterations", root, its)
    return ImplicitLinewidth(
        value=root,
        width=abs(root),
        bracket=(float(brackets[0][0]), float(brackets[0][1])),
        iterations=its,
        residual=float(residual),
        converged=converged,
    )

