"""
Peak detection and full width at half maximum of sampled spectra.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.signal import find_peaks

from ..core.data import SpectrumResult
from ..core.errors import ParameterError, SpectrumError

logger = logging.getLogger(__name__)

MIN_POINTS_ABOVE_HALF = 5
# Peaks lower than this fraction of the maximum are not reported
PEAK_PROMINENCE = 1e-3
# "auto" treats two peaks as a symmetric pair above this height ratio
PAIR_RATIO = 0.5

MODES = ("dominant", "separation", "auto")


def detect_peaks(offsets: np.ndarray, intensity: np.ndarray, prominence: float = PEAK_PROMINENCE) -> list[tuple[float, float]]:
    """Local maxima as (offset, height), highest first."""
    intensity = np.asarray(intensity, dtype=float)
    if intensity.size < 3:
        return []
    top = float(np.max(intensity))
    if top <= 0:
        return []
    idx, _ = find_peaks(intensity, prominence=prominence * top)
    peaks = [(float(offsets[i]), float(intensity[i])) for i in idx]
    return sorted(peaks, key=lambda fh: -fh[1])


def half_max_span(intensity: np.ndarray, i: int) -> tuple[int, int]:
    """Indices (left, right) of the first samples below half of intensity[i] on each side.

    -1 or len(intensity) when the peak is not bounded inside the grid.
    """
    half = 0.5 * intensity[i]
    left = i
    while left >= 0 and intensity[left] >= half:
        left -= 1
    right = i
    while right < len(intensity) and intensity[right] >= half:
        right += 1
    return left, right


def points_above_half(intensity: np.ndarray, i: int) -> int:
    left, right = half_max_span(intensity, i)
    return right - left - 1


def _crossing(x0: float, y0: float, x1: float, y1: float, level: float) -> float:
    if y1 == y0:
        return 0.5 * (x0 + x1)
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def dominant_fwhm(offsets: np.ndarray, intensity: np.ndarray, min_points: int = MIN_POINTS_ABOVE_HALF) -> float:
    """Linearly interpolated FWHM of the highest peak."""
    offsets = np.asarray(offsets, dtype=float)
    intensity = np.asarray(intensity, dtype=float)
    if offsets.size != intensity.size or offsets.size < 3:
        raise SpectrumError("spectrum needs at least 3 samples")
    i = int(np.argmax(intensity))
    if intensity[i] <= 0:
        raise SpectrumError("spectrum has no positive peak")
    left, right = half_max_span(intensity, i)
    if left < 0 or right >= len(intensity):
        raise SpectrumError(
            f"peak at {offsets[i]:.6g} rad/ms is not bounded by the grid; widen the frequency range"
        )
    inside = right - left - 1
    if inside < min_points:
        raise SpectrumError(
            f"peak at {offsets[i]:.6g} rad/ms has {inside} points above half maximum "
            f"(need {min_points}); use a finer f_grid"
        )
    half = 0.5 * intensity[i]
    lo = _crossing(offsets[left], intensity[left], offsets[left + 1], intensity[left + 1], half)
    hi = _crossing(offsets[right - 1], intensity[right - 1], offsets[right], intensity[right], half)
    return float(hi - lo)


def peak_separation(peaks: list[tuple[float, float]]) -> float:
    if len(peaks) < 2:
        raise SpectrumError(f"need two peaks for a separation, found {len(peaks)}")
    (f1, _), (f2, _) = sorted(peaks, key=lambda fh: -fh[1])[:2]
    return abs(f1 - f2)


def is_symmetric_pair(peaks: list[tuple[float, float]]) -> bool:
    """Two comparable peaks on either side of zero and nothing comparable between them."""
    if len(peaks) < 2:
        return False
    ranked = sorted(peaks, key=lambda fh: -fh[1])
    (f1, h1), (f2, h2) = ranked[:2]
    if h2 < PAIR_RATIO * h1 or f1 * f2 >= 0:
        return False
    lo, hi = min(f1, f2), max(f1, f2)
    return not any(lo < f < hi and h >= PAIR_RATIO * h1 for f, h in ranked[2:])


def fwhm(sr: SpectrumResult, mode: str = "dominant", min_points: int = MIN_POINTS_ABOVE_HALF) -> float:
    """Spectral width of a sampled spectrum.

    "dominant" is the FWHM of the highest peak, "separation" the distance
    between the two highest peaks, and "auto" picks the separation for a
    symmetric double-peak spectrum (the weak-pump Delta = 0 case) and the
    dominant FWHM otherwise.
    """
    if mode not in MODES:
        raise ParameterError(f"unknown fwhm mode {mode!r}; expected one of {', '.join(MODES)}")
    peaks = sr.peaks or detect_peaks(sr.offsets, sr.intensity)
    if mode == "separation":
        return peak_separation(peaks)
    if mode == "auto" and is_symmetric_pair(peaks):
        logger.debug("fwhm: symmetric side peaks, reporting their separation")
        return peak_separation(peaks)
    return dominant_fwhm(sr.offsets, sr.intensity, min_points)
