"""
Transmission spectra from a pulsed drive.

The driven equations are integrated from the all-ground vacuum while a
Gaussian pulse enters through the left mirror. The transmitted field
sqrt(kappa2) <a>(t) and the input sqrt(kappa1) Omega(t) are Fourier
transformed; their ratio over the pulse bandwidth is the transmission.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..core.data import (
    DriveConfig,
    DriveShape,
    IntegrationConfig,
    Layout,
    PhysicalParams,
    SpectrumKind,
    SpectrumResult,
    validate_params,
)
from ..core.errors import ParameterError, SpectrumError
from ..core.layout import ground_vacuum_driven
from ..cumulant.driven import DrivenEquations
from ..dynamics.integrate import Trajectory, integrate
from .fwhm import detect_peaks, dominant_fwhm

logger = logging.getLogger(__name__)

SAMPLES_PER_SIGMA = 8
CHUNK_SAMPLES = 4096
# Output amplitude at the end of the run, relative to its peak
DECAY_GUARD = 1e-4
ZERO_PAD = 4
# Frequencies where the input spectrum is weaker than this are dropped
INPUT_FLOOR = 1e-3


@dataclass
class PulseResponse:
    """Cavity field sampled on a uniform grid during and after a pulse."""
    t: np.ndarray
    alpha: np.ndarray
    drive_in: np.ndarray
    dt: float
    nfev: int = 0
    trajectory: Optional[Trajectory] = None
    diagnostics: dict = field(default_factory=dict)


def _check_pulse(p: PhysicalParams, drive: DriveConfig) -> PhysicalParams:
    validate_params(p, require_cavity=True)
    if drive.shape != DriveShape.GAUSSIAN:
        raise ParameterError("transmission needs a gaussian drive pulse")
    if p.kappa2 <= 0:
        raise ParameterError("transmission needs kappa2 > 0 (no output mirror loss)")
    return dataclasses.replace(p, drive=drive)


def pulse_response(
    p: PhysicalParams,
    drive: DriveConfig,
    cfg: IntegrationConfig,
    keep_every: Optional[int] = None,
) -> PulseResponse:
    """Integrate the driven system until the transmitted field has died out.

    Samples every sigma/8. The run is extended chunk by chunk after the
    pulse has passed until |<a>| over a chunk stays below 1e-4 of its peak;
    cfg.t_end caps the total time. With keep_every set, every keep_every-th
    full state is kept for trajectory export.
    """
    p = _check_pulse(p, drive)
    eq = DrivenEquations(p)
    dt = drive.pulse_sigma / SAMPLES_PER_SIGMA
    pulse_end = drive.pulse_center + 6.0 * drive.pulse_sigma
    chunk_cfg = cfg.replace(output_stride=dt)

    y = ground_vacuum_driven()
    times, alphas, kept_t, kept_y = [0.0], [0j], [0.0], [y]
    k = 0
    peak = 0.0
    while True:
        t0, t1 = k * dt, (k + CHUNK_SAMPLES) * dt
        if t0 >= cfg.t_end:
            raise SpectrumError(
                f"transmitted field still at {abs(alphas[-1]) / max(peak, 1e-300):.2e} of its peak at t_end={cfg.t_end:.6g} ms; "
                "increase integration.t_end_ms"
            )
        traj = integrate(eq, y, chunk_cfg.replace(t_end=t1), t0=t0)
        y = traj.final
        chunk_alpha = traj.y[1:, 0] + 1j * traj.y[1:, 1]
        times.extend(traj.t[1:])
        alphas.extend(chunk_alpha)
        if keep_every:
            for t, row in zip(traj.t[1::keep_every], traj.y[1::keep_every]):
                kept_t.append(t)
                kept_y.append(row)
        k += CHUNK_SAMPLES
        peak = max(peak, float(np.max(np.abs(chunk_alpha))))
        if t1 >= pulse_end and peak > 0 and np.max(np.abs(chunk_alpha)) < DECAY_GUARD * peak:
            break
        logger.debug("pulse response: t=%.4g ms, |a|/peak=%.2e", t1, abs(chunk_alpha[-1]) / max(peak, 1e-300))

    t = np.asarray(times)
    alpha = np.asarray(alphas)
    drive_in = np.sqrt(p.kappa1) * drive.amplitude(t)
    logger.info("pulse response: %d samples over %.4g ms, %d evaluations", t.size, t[-1], eq.evaluations)
    trajectory = None
    if keep_every:
        trajectory = Trajectory(t=np.asarray(kept_t), y=np.asarray(kept_y), layout=Layout.DRIVEN, nfev=eq.evaluations)
    return PulseResponse(
        t=t,
        alpha=alpha,
        drive_in=drive_in,
        dt=dt,
        nfev=eq.evaluations,
        trajectory=trajectory,
        diagnostics={"samples": int(t.size), "t_end_ms": float(t[-1]), "peak_abs_alpha": peak},
    )


def fourier(x: np.ndarray, dt: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """F(w) = integral x(t) exp(i w t) dt on the FFT grid, sorted by w."""
    ft = np.fft.ifft(x, n) * n * dt
    w = 2.0 * np.pi * np.fft.fftfreq(n, dt)
    return np.fft.fftshift(w), np.fft.fftshift(ft)


def transmission_from_response(p: PhysicalParams, response: PulseResponse) -> SpectrumResult:
    """Spectrum of the ratio F[out]/F[in] over the pulse bandwidth.

    `intensity` holds the power transmission |F[out]/F[in]|^2, so an empty
    balanced cavity peaks at 1 with FWHM kappa; the amplitude ratio is its
    square root. `phase` is the unwrapped argument of the ratio.
    """
    n = ZERO_PAD * response.t.size
    w, f_in = fourier(response.drive_in, response.dt, n)
    _, f_out = fourier(np.sqrt(p.kappa2) * response.alpha, response.dt, n)
    keep = np.abs(f_in) > INPUT_FLOOR * np.max(np.abs(f_in))
    ratio = f_out[keep] / f_in[keep]
    offsets = w[keep]
    intensity = np.abs(ratio) ** 2
    phase = np.unwrap(np.angle(ratio))
    peaks = detect_peaks(offsets, intensity)
    try:
        width = dominant_fwhm(offsets, intensity)
    except SpectrumError as exc:
        logger.debug("transmission fwhm unavailable: %s", exc)
        width = None
    return SpectrumResult(
        kind=SpectrumKind.TRANSMISSION,
        offsets=offsets,
        intensity=intensity,
        phase=phase,
        peaks=peaks,
        fwhm=width,
    )


def transmission_spectrum(p: PhysicalParams, drive: DriveConfig, cfg: IntegrationConfig) -> SpectrumResult:
    """Power transmission |F[out]/F[in]|^2 and phase versus offset from the drive carrier."""
    response = pulse_response(p, drive, cfg)
    sr = transmission_from_response(p, response)
    logger.info("transmission: %d peaks over %d frequencies", len(sr.peaks), sr.offsets.size)
    return sr


def linear_transmission(p: PhysicalParams, offsets: np.ndarray) -> np.ndarray:
    """Weak-drive transmission of the linearized system, for comparison with pulsed runs.

    With the atoms held in the ground state the bright and dark coherences
    respond linearly; solving that 3x3 system at each drive offset gives the
    intracavity amplitude per unit drive.
    """
    validate_params(p, require_cavity=True)
    Gc = np.sqrt(p.n_atoms) * p.bright_coupling
    wa, wc = p.frame_offsets()
    half = 0.5 * p.delta_zeeman
    out = np.empty(len(offsets))
    for i, w in enumerate(np.asarray(offsets, dtype=float)):
        # unknowns: a, sigma_B, sigma_D (collective) at frequency w
        m = np.array([
            [1j * (wc - w) + 0.5 * p.kappa, 1j * Gc, 0.0],
            [1j * Gc, 1j * (wa - w) + 0.5 * p.decay_plus, 1j * half + 0.5 * p.decay_minus],
            [0.0, 1j * half + 0.5 * p.decay_minus, 1j * (wa - w) + 0.5 * p.decay_plus],
        ], dtype=complex)
        sol = np.linalg.solve(m, np.array([-1j * np.sqrt(p.kappa1), 0.0, 0.0]))
        out[i] = p.kappa2 * abs(sol[0]) ** 2
    return out

