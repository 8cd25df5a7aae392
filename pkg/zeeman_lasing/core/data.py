"""
Shared data structures for Zeeman Lasing.

All frequencies and rates are angular frequencies in rad/ms, all times in ms
(see core.units).
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import LayoutError, ParameterError

logger = logging.getLogger(__name__)


# =============================================================================
# ENUMS
# =============================================================================


class DriveShape(Enum):
    """Temporal envelope of the drive laser."""
    GAUSSIAN = "gaussian"
    CONSTANT = "constant"


class Layout(Enum):
    """Flat moment-state layouts and their number of stored reals."""
    DRIVEN = "driven102"
    REDUCED = "reduced16"
    REDUCED_FILTER = "reduced16+filter"

    @property
    def size(self) -> int:
        return _LAYOUT_SIZES[self]


# alpha, aa (complex), n, rho1 (3x3 hermitian), Y (3x3 complex), rho2 (9x9 hermitian)
DRIVEN_SIZE = 2 + 2 + 1 + 9 + 18 + 81
REDUCED_SIZE = 14
FILTER_SIZE = 7

_LAYOUT_SIZES = {
    Layout.DRIVEN: DRIVEN_SIZE,
    Layout.REDUCED: REDUCED_SIZE,
    Layout.REDUCED_FILTER: REDUCED_SIZE + FILTER_SIZE,
}


class Branch(Enum):
    """Dressed-state branch, sorted by descending shift."""
    PLUS = "plus"
    ZERO = "zero"
    MINUS = "minus"


class SpectrumKind(Enum):
    TRANSMISSION = "transmission"
    EMISSION = "emission"


# =============================================================================
# PHYSICAL PARAMETERS
# =============================================================================


@dataclass(frozen=True)
class DriveConfig:
    """Drive laser coupled through the left mirror.

    amp0 is Omega_0 in sqrt(1/ms); sqrt(kappa1) * Omega(t) is the drive
    amplitude entering the cavity equations.
    """
    omega_d_offset: float = 0.0
    amp0: float = 0.0
    pulse_center: float = 0.0
    pulse_sigma: float = 0.0
    shape: DriveShape = DriveShape.GAUSSIAN

    def __post_init__(self):
        if self.amp0 < 0:
            raise ParameterError(f"drive amp0 must be >= 0, got {self.amp0}")
        if self.shape == DriveShape.GAUSSIAN and not self.pulse_sigma > 0:
            raise ParameterError(f"gaussian pulse needs pulse_sigma > 0, got {self.pulse_sigma}")

    def amplitude(self, t):
        """Omega(t); accepts scalars or numpy arrays."""
        if self.shape == DriveShape.CONSTANT:
            return self.amp0 * np.ones_like(t, dtype=float) if np.ndim(t) else self.amp0
        x = (np.asarray(t, dtype=float) - self.pulse_center) / self.pulse_sigma
        value = self.amp0 * np.exp(-0.5 * x * x)
        return value if np.ndim(t) else float(value)

    def spectrum_window(self) -> float:
        """Angular half-bandwidth over which the pulse spectrum exceeds 1e-3 of its peak."""
        if self.shape == DriveShape.CONSTANT:
            return 0.0
        return math.sqrt(2.0 * math.log(1e3)) / self.pulse_sigma

    def to_dict(self) -> dict:
        return {
            "omega_d_offset": self.omega_d_offset,
            "amp0": self.amp0,
            "pulse_center": self.pulse_center,
            "pulse_sigma": self.pulse_sigma,
            "shape": self.shape.value,
        }


@dataclass(frozen=True)
class PhysicalParams:
    """Identical-atom ensemble coupled to one cavity mode.

    omega_a_offset and omega_c_offset are the atomic and cavity frequencies
    measured from the rotating-frame carrier.
    """
    n_atoms: int
    g: float
    kappa1: float
    kappa2: float
    gamma_plus: float
    gamma_minus: float
    eta_plus: float = 0.0
    eta_minus: float = 0.0
    delta_zeeman: float = 0.0
    omega_a_offset: float = 0.0
    omega_c_offset: float = 0.0
    drive: Optional[DriveConfig] = None

    @property
    def kappa(self) -> float:
        return self.kappa1 + self.kappa2

    @property
    def decay_plus(self) -> float:
        """Gamma_+ = (gamma_+ + gamma_-)/2."""
        return 0.5 * (self.gamma_plus + self.gamma_minus)

    @property
    def decay_minus(self) -> float:
        """Gamma_- = (gamma_+ - gamma_-)/2, the bright-dark dissipative coupling."""
        return 0.5 * (self.gamma_plus - self.gamma_minus)

    @property
    def pump_plus(self) -> float:
        return 0.5 * (self.eta_plus + self.eta_minus)

    @property
    def pump_minus(self) -> float:
        return 0.5 * (self.eta_plus - self.eta_minus)

    @property
    def bright_coupling(self) -> float:
        """sqrt(2) g: coupling of the bright excited state to the cavity."""
        return math.sqrt(2.0) * self.g

    @property
    def purcell_rate(self) -> Optional[float]:
        """Gamma_c = 4 g^2 / kappa, or None without a lossy cavity."""
        if self.kappa <= 0:
            return None
        return 4.0 * self.g ** 2 / self.kappa

    @property
    def atom_cavity_detuning(self) -> float:
        return self.omega_a_offset - self.omega_c_offset

    def frame_offsets(self) -> tuple[float, float]:
        """(omega_a, omega_c) measured from the drive carrier when a drive is set."""
        ref = self.drive.omega_d_offset if self.drive is not None else 0.0
        return self.omega_a_offset - ref, self.omega_c_offset - ref

    def with_pump(self, eta_plus: float, eta_minus: Optional[float] = None) -> PhysicalParams:
        return dataclasses.replace(
            self, eta_plus=eta_plus, eta_minus=eta_plus if eta_minus is None else eta_minus
        )

    def derived(self) -> dict:
        """Derived rates, for logs and manifests."""
        return {
            "kappa": self.kappa,
            "decay_plus": self.decay_plus,
            "decay_minus": self.decay_minus,
            "pump_plus": self.pump_plus,
            "pump_minus": self.pump_minus,
            "purcell_rate": self.purcell_rate,
        }

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name != "drive"}
        d["drive"] = self.drive.to_dict() if self.drive else None
        return d


def validate_params(p: PhysicalParams, require_cavity: bool = False) -> PhysicalParams:
    """Check a parameter set; returns it unchanged when valid.

    Derived quantities (kappa, Gamma_+-, Lambda_+-, Purcell rate) are
    properties of PhysicalParams and are logged here at DEBUG.
    """
    if p.n_atoms < 1:
        raise ParameterError(f"n_atoms must be >= 1, got {p.n_atoms}")
    rates = {
        "g": p.g,
        "kappa1": p.kappa1,
        "kappa2": p.kappa2,
        "gamma_plus": p.gamma_plus,
        "gamma_minus": p.gamma_minus,
        "eta_plus": p.eta_plus,
        "eta_minus": p.eta_minus,
        "delta_zeeman": p.delta_zeeman,
    }
    for name, value in rates.items():
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite, got {value}")
        if value < 0:
            raise ParameterError(f"{name} must be >= 0, got {value}")
    if require_cavity and p.kappa <= 0:
        raise ParameterError("cavity dynamics requested but kappa = kappa1 + kappa2 is 0")
    if p.purcell_rate is None:
        logger.debug("kappa = 0: Purcell rate undefined")
    logger.debug("derived rates: %s", p.derived())
    return p


def to_rotating_frame(p: PhysicalParams, carrier: float) -> PhysicalParams:
    """Move to the frame rotating at `carrier` (measured in the current frame).

    Only frequency differences enter the dynamics, so every offset (atom,
    cavity and drive) shifts by the same amount.
    """
    drive = p.drive
    if drive is not None:
        drive = dataclasses.replace(drive, omega_d_offset=drive.omega_d_offset - carrier)
    return dataclasses.replace(
        p,
        omega_a_offset=p.omega_a_offset - carrier,
        omega_c_offset=p.omega_c_offset - carrier,
        drive=drive,
    )


@dataclass(frozen=True)
class FilterParams:
    """Weakly coupled filter cavity used to sample the emission spectrum."""
    omega_f_offset: float
    beta: float
    chi: float

    def __post_init__(self):
        if not self.chi > 0:
            raise ParameterError(f"filter chi must be > 0, got {self.chi}")
        if not self.beta > 0:
            raise ParameterError(f"filter beta must be > 0, got {self.beta}")

    def at(self, omega_f_offset: float) -> FilterParams:
        return dataclasses.replace(self, omega_f_offset=omega_f_offset)

    @classmethod
    def default_for(
        cls,
        p: PhysicalParams,
        omega_f_offset: float = 0.0,
        expected_width: Optional[float] = None,
    ) -> FilterParams:
        """chi = min(max(2pi * 1 Hz, Gamma / 10), kappa/1e4), beta = chi/10.

        Gamma is the expected emission linewidth (rad/ms); without it chi
        starts from 2pi * 1 Hz.
        """
        chi = 2.0 * math.pi * 1e-3
        if expected_width is not None and math.isfinite(expected_width):
            chi = max(chi, abs(expected_width) / 10.0)
        if p.kappa > 0:
            chi = min(chi, p.kappa * 1e-4)
        return cls(omega_f_offset=omega_f_offset, beta=chi / 10.0, chi=chi)


# =============================================================================
# STATES
# =============================================================================


@dataclass(frozen=True)
class MomentState:
    """Flat real vector of independent expectation values in a given layout."""
    layout: Layout
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.layout.size,):
            raise LayoutError(
                f"{self.layout.value} state needs {self.layout.size} values, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    def expect(self, layout: Layout) -> MomentState:
        if self.layout != layout:
            raise LayoutError(f"expected {layout.value} state, got {self.layout.value}")
        return self

    def to_dict(self) -> dict:
        return {"layout": self.layout.value, "values": [float(v) for v in self.values]}

    @classmethod
    def from_dict(cls, d: dict) -> MomentState:
        return cls(layout=Layout(d["layout"]), values=np.array(d["values"], dtype=float))


# =============================================================================
# DRESSED STATES
# =============================================================================


@dataclass(frozen=True)
class DressedLevel:
    """Eigenstate of the n-photon block on |D>|n>, |B>|n>, |G>|n+1>."""
    branch: Branch
    n_photons: int
    shift: float
    amp_D: complex
    amp_B: complex
    amp_G: complex

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.amp_D, self.amp_B, self.amp_G], dtype=complex)


@dataclass(frozen=True)
class PeakPrediction:
    """Predicted transmission line; weight is None where no closed form exists."""
    frequency_offset: float
    weight: Optional[float]
    group: int
    n_photons: int = 0


# =============================================================================
# SOLVER AND ANALYSIS RESULTS
# =============================================================================


@dataclass(frozen=True)
class IntegrationConfig:
    rtol: float = 1e-8
    atol: float = 1e-12
    t_end: float = 50.0
    max_step: float = math.inf
    output_stride: Optional[float] = None
    method: str = "DOP853"

    def __post_init__(self):
        if not 0 < self.rtol <= 1e-2:
            raise ParameterError(f"rtol must be in (0, 1e-2], got {self.rtol}")
        if not self.atol > 0:
            raise ParameterError(f"atol must be > 0, got {self.atol}")
        if not self.t_end > 0:
            raise ParameterError(f"t_end must be > 0, got {self.t_end}")
        if self.output_stride is not None and not self.output_stride > 0:
            raise ParameterError(f"output_stride must be > 0, got {self.output_stride}")

    def replace(self, **changes) -> IntegrationConfig:
        return dataclasses.replace(self, **changes)


@dataclass
class SpectrumResult:
    """Sampled spectrum with its detected peaks."""
    kind: SpectrumKind
    offsets: np.ndarray
    intensity: np.ndarray
    phase: Optional[np.ndarray] = None
    peaks: list[tuple[float, float]] = field(default_factory=list)
    fwhm: Optional[float] = None

    def normalized(self) -> SpectrumResult:
        peak = float(np.max(self.intensity)) if len(self.intensity) else 0.0
        scale = 1.0 / peak if peak > 0 else 1.0
        return SpectrumResult(
            kind=self.kind,
            offsets=self.offsets,
            intensity=self.intensity * scale,
            phase=self.phase,
            peaks=[(f, h * scale) for f, h in self.peaks],
            fwhm=self.fwhm,
        )


@dataclass(frozen=True)
class LinewidthEstimate:
    """Semi-analytic linewidth: signed formula value, its magnitude, validity flag."""
    value: float
    width: float
    valid: bool


@dataclass(frozen=True)
class DickePoint:
    eta_over_gamma: float
    J_B: float
    M_B: float
    J_D: float
    M_D: float


@dataclass
class RunManifest:
    """Provenance record written next to the CSV outputs."""
    command: str
    version: str
    config: dict
    argv: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "config": self.config,
            "argv": self.argv,
            "timings": self.timings,
            "diagnostics": self.diagnostics,
            "outputs": self.outputs,
        }
