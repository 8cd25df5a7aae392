"""
Emission spectra sampled by a weakly coupled filter cavity.

The main system is solved once; every filter frequency is an independent
linear solve, so grids are evaluated concurrently and reassembled in grid
order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from ..core.data import FilterParams, IntegrationConfig, MomentState, PhysicalParams, SpectrumKind, SpectrumResult
from ..core.errors import ConvergenceError, ParameterError, SpectrumError, ZeemanLasingError
from ..cumulant.filter import FilterSystem, check_steady
from .fwhm import MIN_POINTS_ABOVE_HALF, detect_peaks, fwhm, points_above_half
from .lasing import lasing_steady_state
from .linewidth import linewidth_semianalytic

logger = logging.getLogger(__name__)

ZOOM_FACTOR = 10
MAX_ZOOM_PASSES = 6
ZOOM_PEAKS = 3


def _main_steady(p: PhysicalParams, steady: Optional[MomentState], cfg: Optional[IntegrationConfig]) -> MomentState:
    if p.eta_plus <= 0 and p.eta_minus <= 0:
        raise ParameterError("emission spectrum needs incoherent pumping (eta_plus or eta_minus > 0)")
    if steady is not None:
        check_steady(p, steady.values)
        return steady
    result = lasing_steady_state(p, cfg)
    if not result.converged:
        raise ConvergenceError(
            f"main steady state not converged (residual {result.residual:.3e})",
            state=result.state,
            residual=result.residual,
        )
    return result.moment_state()


def default_filter(p: PhysicalParams, steady: MomentState) -> FilterParams:
    """Filter resolution scaled to the expected linewidth of the main steady state.

    Falls back to the width-free default when the closed-form estimate is
    unavailable (unbalanced rates) or outside its validity.
    """
    width = None
    try:
        est = linewidth_semianalytic(p, steady)
        if est.valid:
            width = est.width
    except ZeemanLasingError as exc:
        logger.debug("no linewidth estimate for the filter default: %s", exc)
    filt = FilterParams.default_for(p, expected_width=width)
    logger.debug("default filter: chi=%.4g beta=%.4g rad/ms (expected width %s)", filt.chi, filt.beta, width)
    return filt


def filter_scan(
    p: PhysicalParams,
    steady: MomentState,
    offsets: Sequence[float],
    filt: Optional[FilterParams] = None,
    jobs: int = 1,
) -> np.ndarray:
    """Steady filter photon number at each offset from the cavity frequency."""
    filt = filt or FilterParams.default_for(p)
    wc = p.omega_c_offset

    def point(f: float) -> float:
        return FilterSystem(p, filt.at(wc + f), steady, check=False).photon_number()

    if jobs > 1 and len(offsets) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(point, offsets))
    else:
        values = [point(f) for f in offsets]
    return np.asarray(values, dtype=float)


def _build_result(offsets: np.ndarray, values: np.ndarray, width_mode: str) -> SpectrumResult:
    order = np.argsort(offsets)
    offsets, values = offsets[order], values[order]
    top = float(np.max(np.abs(values))) if values.size else 0.0
    if values.size and np.min(values) < -1e-9 * max(top, 1e-300):
        logger.warning("filter photon number negative down to %.3e (peak %.3e)", np.min(values), top)
    values = np.maximum(values, 0.0)
    sr = SpectrumResult(kind=SpectrumKind.EMISSION, offsets=offsets, intensity=values)
    sr.peaks = detect_peaks(offsets, values)
    try:
        sr.fwhm = fwhm(sr, mode=width_mode)
    except SpectrumError as exc:
        logger.info("emission fwhm unavailable: %s", exc)
    return sr


def emission_spectrum(
    p: PhysicalParams,
    f_grid: Sequence[float],
    filt: Optional[FilterParams] = None,
    cfg: Optional[IntegrationConfig] = None,
    steady: Optional[MomentState] = None,
    jobs: int = 1,
    normalize: bool = False,
    width_mode: str = "auto",
) -> SpectrumResult:
    """<b+b> versus filter offset from the cavity frequency.

    The main reduced16 steady state is solved once (or taken from `steady`)
    and held fixed while the filter frequency is swept.
    """
    offsets = np.asarray(f_grid, dtype=float)
    if offsets.size == 0:
        raise ParameterError("empty filter frequency grid")
    main = _main_steady(p, steady, cfg)
    filt = filt or default_filter(p, main)
    sr = _build_result(offsets, filter_scan(p, main, offsets, filt, jobs), width_mode)
    logger.info("emission: %d frequencies, %d peaks", offsets.size, len(sr.peaks))
    return sr.normalized() if normalize else sr


def _zoom_grid(offsets: np.ndarray, values: np.ndarray, known: set) -> np.ndarray:
    """Points at 10x finer spacing around the highest peaks, excluding known ones."""
    peaks = detect_peaks(offsets, values) or [(float(offsets[np.argmax(values)]), float(np.max(values)))]
    new = []
    for f, _ in peaks[:ZOOM_PEAKS]:
        i = int(np.argmin(np.abs(offsets - f)))
        lo = offsets[max(i - 1, 0)]
        hi = offsets[min(i + 1, offsets.size - 1)]
        step = max(f - lo, hi - f) / ZOOM_FACTOR
        if step <= 0:
            continue
        for x in np.linspace(f - ZOOM_FACTOR * step, f + ZOOM_FACTOR * step, 2 * ZOOM_FACTOR + 1):
            if x >= offsets[0] and x <= offsets[-1] and round(float(x), 12) not in known:
                new.append(float(x))
    return np.unique(np.asarray(new, dtype=float))


def adaptive_emission_grid(
    p: PhysicalParams,
    span: float,
    n_coarse: int = 201,
    filt: Optional[FilterParams] = None,
    cfg: Optional[IntegrationConfig] = None,
    steady: Optional[MomentState] = None,
    jobs: int = 1,
    max_passes: int = MAX_ZOOM_PASSES,
    min_points: int = MIN_POINTS_ABOVE_HALF,
    normalize: bool = False,
    width_mode: str = "auto",
) -> SpectrumResult:
    """Emission spectrum on a grid refined around its peaks.

    A coarse symmetric grid over [-span, span] (always containing 0) is
    followed by zoom passes at 10x finer spacing around the highest peaks
    until the dominant peak has min_points samples above half maximum.
    """
    if span <= 0:
        raise ParameterError(f"emission span must be > 0, got {span}")
    if n_coarse < 3:
        raise ParameterError(f"coarse grid needs at least 3 points, got {n_coarse}")
    if n_coarse % 2 == 0:
        n_coarse += 1
    main = _main_steady(p, steady, cfg)
    filt = filt or default_filter(p, main)
    offsets = np.linspace(-span, span, n_coarse)
    values = filter_scan(p, main, offsets, filt, jobs)

    for n_pass in range(1, max_passes + 1):
        top = int(np.argmax(values))
        if points_above_half(values, top) >= min_points:
            break
        known = {round(float(x), 12) for x in offsets}
        extra = _zoom_grid(offsets, values, known)
        if extra.size == 0:
            break
        offsets = np.concatenate([offsets, extra])
        values = np.concatenate([values, filter_scan(p, main, extra, filt, jobs)])
        order = np.argsort(offsets)
        offsets, values = offsets[order], values[order]
        logger.debug("emission zoom pass %d: %d new points, %d total", n_pass, extra.size, offsets.size)

    sr = _build_result(offsets, values, width_mode)
    logger.info("adaptive emission grid: %d frequencies, fwhm %s", offsets.size, sr.fwhm)
    return sr.normalized() if normalize else sr
