"""
Physics outputs: transmission and emission spectra, linewidths, FWHM,
pseudo-Dicke numbers, pump sweeps and the oracle suite.
"""

from .fwhm import fwhm, dominant_fwhm, peak_separation, detect_peaks
from .lasing import lasing_steady_state, lasing_trajectory
from .transmission import PulseResponse, pulse_response, transmission_spectrum, transmission_from_response, linear_transmission
from .emission import emission_spectrum, adaptive_emission_grid, filter_scan
from .linewidth import ImplicitLinewidth, linewidth_semianalytic, linewidth_implicit, steady_inputs
from .dicke import dicke_numbers, collective_numbers
from .sweep import SweepRow, SweepSettings, photon_number_ratio, pump_sweep, steady_observables, sweep_point
from .verify import CheckResult, run_verification

__all__ = [
    "fwhm",
    "dominant_fwhm",
    "peak_separation",
    "detect_peaks",
    "lasing_steady_state",
    "lasing_trajectory",
    "PulseResponse",
    "pulse_response",
    "transmission_spectrum",
    "transmission_from_response",
    "linear_transmission",
    "emission_spectrum",
    "adaptive_emission_grid",
    "filter_scan",
    "ImplicitLinewidth",
    "linewidth_semianalytic",
    "linewidth_implicit",
    "steady_inputs",
    "dicke_numbers",
    "collective_numbers",
    "SweepRow",
    "SweepSettings",
    "pump_sweep",
    "sweep_point",
    "steady_observables",
    "photon_number_ratio",
    "CheckResult",
    "run_verification",
]
