"""
Pump sweeps: steady state, linewidths and Dicke numbers per pump rate.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..core.data import FilterParams, IntegrationConfig, MomentState, PhysicalParams
from ..core.errors import ParameterError, ZeemanLasingError
from ..core.layout import unpack_reduced
from ..dynamics.steady import SteadyState
from .dicke import dicke_numbers
from .emission import adaptive_emission_grid
from .lasing import lasing_steady_state
from .linewidth import linewidth_implicit, linewidth_semianalytic

logger = logging.getLogger(__name__)

NAN = float("nan")


@dataclass
class SweepRow:
    """One pump rate of a sweep. Rates are angular (rad/ms)."""
    eta_over_gamma: float
    eta: float
    n: float = NAN
    p_BB: float = NAN
    p_DD: float = NAN
    p_gg: float = NAN
    im_DB: float = NAN
    lw_semi: float = NAN
    lw_semi_valid: bool = False
    lw_implicit: float = NAN
    fwhm: float = NAN
    J_B: float = NAN
    M_B: float = NAN
    J_D: float = NAN
    M_D: float = NAN
    residual: float = NAN
    converged: bool = False
    error: str = ""

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    def values(self) -> list:
        return [getattr(self, name) for name in self.columns()]


@dataclass(frozen=True)
class SweepSettings:
    """fwhm_span > 0 adds an adaptive filter sweep of that half-width per row."""
    fwhm_span: float = 0.0
    n_coarse: int = 201
    filter: Optional[FilterParams] = None
    warm_start: bool = True
    jobs: int = 1


def _reference_gamma(p: PhysicalParams) -> float:
    gamma = p.decay_plus
    if gamma <= 0:
        raise ParameterError("pump sweep in units of gamma needs gamma > 0")
    return gamma


def sweep_point(
    p: PhysicalParams,
    eta_over_gamma: float,
    cfg: IntegrationConfig,
    settings: SweepSettings,
    s0: Optional[MomentState] = None,
) -> tuple[SweepRow, Optional[MomentState]]:
    """Evaluate one pump rate; failures are recorded in the row, never raised."""
    eta = eta_over_gamma * _reference_gamma(p)
    q = p.with_pump(eta)
    try:
        result = lasing_steady_state(q, cfg, s0)
    except ZeemanLasingError as exc:
        row = SweepRow(eta_over_gamma=eta_over_gamma, eta=eta, error=f"steady state: {exc}")
        logger.warning("sweep eta/gamma=%.4g: %s", eta_over_gamma, row.error)
        return row, None
    row = steady_observables(q, eta_over_gamma, result, settings)
    return row, result.moment_state() if result.converged else None


def steady_observables(
    q: PhysicalParams,
    eta_over_gamma: float,
    result: SteadyState,
    settings: Optional[SweepSettings] = None,
) -> SweepRow:
    """Populations, linewidths and Dicke numbers of a solved steady state."""
    settings = settings or SweepSettings()
    eta = q.eta_plus
    row = SweepRow(eta_over_gamma=eta_over_gamma, eta=eta)
    errors = []
    steady = result.moment_state()
    m = unpack_reduced(steady.values)
    row.n = m.n
    row.p_BB = float(m.p[0, 0].real)
    row.p_DD = float(m.p[1, 1].real)
    row.p_gg = m.p_gg
    row.im_DB = float(m.p[1, 0].imag)
    row.residual = result.residual
    row.converged = result.converged
    if not result.converged:
        errors.append(f"steady state not converged (residual {result.residual:.3e})")

    try:
        est = linewidth_semianalytic(q, steady)
        row.lw_semi, row.lw_semi_valid = est.value, est.valid
    except ZeemanLasingError as exc:
        errors.append(f"semi-analytic linewidth: {exc}")
    try:
        row.lw_implicit = linewidth_implicit(q, steady).value
    except ZeemanLasingError as exc:
        errors.append(f"implicit linewidth: {exc}")
    try:
        d = dicke_numbers(steady, q.n_atoms, eta_over_gamma)
        row.J_B, row.M_B, row.J_D, row.M_D = d.J_B, d.M_B, d.J_D, d.M_D
    except ZeemanLasingError as exc:
        errors.append(f"dicke numbers: {exc}")
    if settings.fwhm_span > 0 and result.converged and eta > 0:
        try:
            sr = adaptive_emission_grid(
                q, settings.fwhm_span, settings.n_coarse, filt=settings.filter, steady=steady
            )
            row.fwhm = sr.fwhm if sr.fwhm is not None else NAN
        except ZeemanLasingError as exc:
            errors.append(f"fwhm: {exc}")
    row.error = "; ".join(errors)
    if row.error:
        logger.warning("sweep eta/gamma=%.4g: %s", eta_over_gamma, row.error)
    else:
        logger.info("sweep eta/gamma=%.4g: n=%.6g", eta_over_gamma, row.n)
    return row


def pump_sweep(
    p: PhysicalParams,
    eta_grid: Sequence[float],
    cfg: Optional[IntegrationConfig] = None,
    settings: Optional[SweepSettings] = None,
) -> list[SweepRow]:
    """One row per pump rate eta_grid[i] * gamma, in grid order.

    With warm_start each solve starts from the previous converged steady
    state, which follows one branch and forces a serial sweep. Without it
    rows are independent and run on settings.jobs threads.
    """
    cfg = cfg or IntegrationConfig()
    settings = settings or SweepSettings()
    grid = [float(x) for x in eta_grid]
    if not grid:
        raise ParameterError("empty pump grid")
    if any(not math.isfinite(x) or x < 0 for x in grid):
        raise ParameterError("pump grid values must be finite and >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError("pump grid must be strictly ascending")
    _reference_gamma(p)

    if settings.warm_start:
        rows, s0 = [], None
        for x in grid:
            row, steady = sweep_point(p, x, cfg, settings, s0)
            rows.append(row)
            if steady is not None:
                s0 = steady
        return rows

    if settings.jobs > 1:
        with ThreadPoolExecutor(max_workers=settings.jobs) as pool:
            results = list(pool.map(lambda x: sweep_point(p, x, cfg, settings), grid))
    else:
        results = [sweep_point(p, x, cfg, settings) for x in grid]
    return [row for row, _ in results]


def photon_number_ratio(rows_a: list[SweepRow], rows_b: list[SweepRow]) -> np.ndarray:
    """Row-wise n_a / n_b for two sweeps over the same grid."""
    if [r.eta_over_gamma for r in rows_a] != [r.eta_over_gamma for r in rows_b]:
        raise ParameterError("sweeps use different pump grids")
    a = np.array([r.n for r in rows_a])
    b = np.array([r.n for r in rows_b])
    with np.errstate(divide="ignore", invalid="ignore"):
        return a / b
