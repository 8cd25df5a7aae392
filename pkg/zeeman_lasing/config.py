"""
Configuration management for Zeeman Lasing.

Values in the JSON file carry their unit in the key name (g_khz, delta_mhz,
sigma_ns, ...); everything is converted to rad/ms and ms on load.
"""

from __future__ import annotations

import difflib
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

from .core.data import DriveConfig, DriveShape, FilterParams, IntegrationConfig, PhysicalParams, validate_params
from .core.errors import ConfigError, ParameterError
from .core.units import hz_to_angular, khz_to_angular, mhz_to_angular, ns_to_ms, sqrt_khz_to_drive, zeeman_splitting

logger = logging.getLogger(__name__)

OUTPUT_ENV = "ZEEMAN_LASING_OUT"
UNIT_SUFFIXES = ("hz", "khz", "mhz", "ns", "ms", "gauss", "sqrt_khz")


@dataclass
class PhysicsConfig:
    n_atoms: int = 250_000
    g_khz: float = 7.5
    kappa1_khz: float = 75.0
    kappa2_khz: float = 75.0
    gamma_khz: float = 7.5
    gamma_minus_khz: Optional[float] = None  # defaults to gamma_khz
    eta_over_gamma: Optional[float] = 5.0
    eta_khz: Optional[float] = None
    eta_minus_khz: Optional[float] = None  # defaults to the eta_plus rate
    delta_mhz: Optional[float] = 0.1
    b_field_gauss: Optional[float] = None
    detuning_khz: float = 0.0  # omega_a - omega_c


@dataclass
class DriveSettings:
    detuning_khz: float = 0.0  # omega_d - omega_c
    amp0_sqrt_khz: float = 10.0
    center_ns: float = 264.1
    sigma_ns: float = 26.4
    shape: str = "gaussian"


@dataclass
class FilterSettings:
    chi_hz: Optional[float] = None
    beta_hz: Optional[float] = None


@dataclass
class IntegrationSettings:
    rtol: float = 1e-8
    atol: float = 1e-12
    t_end_ms: float = 50.0
    max_step_ms: Optional[float] = None
    output_stride_ms: Optional[float] = None
    method: str = "DOP853"


@dataclass
class SweepConfig:
    eta_over_gamma: list[float] = field(default_factory=lambda: [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0])
    fgrid: Optional[str] = None  # "min:max:n" in kHz
    jobs: int = 1


@dataclass
class ExactConfig:
    n_atoms: int = 2
    n_max: int = 8


_SECTIONS = {
    "drive": DriveSettings,
    "filter": FilterSettings,
    "integration": IntegrationSettings,
    "sweep": SweepConfig,
    "exact": ExactConfig,
}


def _fields(cls) -> list[str]:
    return list(cls.__dataclass_fields__)


def _line_of(text: Optional[str], key: str) -> Optional[int]:
    if not text:
        return None
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None


def _stem(key: str) -> str:
    for suffix in sorted(UNIT_SUFFIXES, key=len, reverse=True):
        if key.endswith("_" + suffix):
            return key[: -len(suffix) - 1]
    return key


def _check_keys(data: dict, allowed: list[str], where: str, path: Optional[Path], text: Optional[str]) -> None:
    for key in data:
        if key in allowed:
            continue
        line = _line_of(text, key)
        same_stem = [k for k in allowed if _stem(k) == _stem(key) and _stem(key) != key]
        if same_stem:
            raise ConfigError(
                f"unit-suffix mismatch for {where}{key!r}: expected {same_stem[0]!r}",
                path=path,
                line=line,
            )
        raise ConfigError(
            f"unknown key {where}{key!r}",
            path=path,
            line=line,
            suggestions=difflib.get_close_matches(key, allowed, n=3),
        )


def parse_fgrid(grid: str) -> tuple[float, float, int]:
    """'min:max:n' in kHz -> (min, max) in rad/ms and n."""
    parts = grid.split(":")
    if len(parts) != 3:
        raise ParameterError(f"fgrid must be 'min:max:n', got {grid!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"fgrid must be 'min:max:n', got {grid!r}") from exc
    if not hi > lo or n < 2:
        raise ParameterError(f"fgrid needs max > min and n >= 2, got {grid!r}")
    return khz_to_angular(lo), khz_to_angular(hi), n


@dataclass
class Config:
    """Main configuration container."""

    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    drive: Optional[DriveSettings] = None
    filter: FilterSettings = field(default_factory=FilterSettings)
    integration: IntegrationSettings = field(default_factory=IntegrationSettings)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    exact: ExactConfig = field(default_factory=ExactConfig)

    # Runtime state (not from config file)
    config_path: Optional[Path] = None
    defaults_used: list[str] = field(default_factory=list)

    @classmethod
    def get_user_config_dir(cls) -> Path:
        """Get user config directory (~/.config/zeeman-lasing/)."""
        return Path.home() / ".config" / "zeeman-lasing"

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> Config:
        """Load configuration from JSON file.

        Search order:
        1. Explicit path if provided
        2. ~/.config/zeeman-lasing/config.json (user config)
        3. ./config.json (working directory)
        4. Built-in defaults
        """
        if config_path is not None and not Path(config_path).exists():
            raise ConfigError("config file not found", path=Path(config_path))
        if config_path is None:
            candidates = [
                cls.get_user_config_dir() / "config.json",
                Path.cwd() / "config.json",
            ]
            for path in candidates:
                if path.exists():
                    config_path = path
                    break

        if config_path is None:
            print("No config.json found, using built-in defaults")
            config = cls._from_dict({})
            config.log_defaults()
            return config

        config_path = Path(config_path)
        print(f"Loading config from: {config_path}")
        text = config_path.read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg}", path=config_path, line=exc.lineno) from exc
        if not isinstance(data, dict):
            raise ConfigError("top level must be a JSON object", path=config_path)

        config = cls._from_dict(data, path=config_path, text=text)
        config.config_path = config_path
        config.log_defaults()
        return config

    @classmethod
    def _from_dict(cls, data: dict, path: Optional[Path] = None, text: Optional[str] = None) -> Config:
        """Parse configuration from dictionary."""
        physics_keys = _fields(PhysicsConfig)
        _check_keys(data, physics_keys + list(_SECTIONS), "", path, text)
        defaults: list[str] = []

        physics_data = {k: v for k, v in data.items() if k in physics_keys}
        for a, b in (("eta_over_gamma", "eta_khz"), ("delta_mhz", "b_field_gauss")):
            if physics_data.get(a) is not None and physics_data.get(b) is not None:
                raise ConfigError(f"{a} and {b} are mutually exclusive", path=path, line=_line_of(text, b))
            if physics_data.get(b) is not None:
                physics_data[a] = None
        defaults += [k for k in physics_keys if k not in data]
        physics = PhysicsConfig(**physics_data)

        sections: dict[str, Any] = {}
        for name, section_cls in _SECTIONS.items():
            block = data.get(name)
            if block is None:
                if name != "drive":
                    defaults.append(f"{name}.*")
                sections[name] = None if name == "drive" else section_cls()
                continue
            if not isinstance(block, dict):
                raise ConfigError(f"{name!r} must be an object", path=path, line=_line_of(text, name))
            keys = _fields(section_cls)
            _check_keys(block, keys, f"{name}.", path, text)
            defaults += [f"{name}.{k}" for k in keys if k not in block]
            sections[name] = section_cls(**block)

        config = cls(physics=physics, **sections)
        config.defaults_used = defaults
        try:
            config.physical_params()
            config.drive_config()
            config.integration_config()
            config.filter_params(config.physical_params())
            if config.sweep.fgrid:
                parse_fgrid(config.sweep.fgrid)
        except (ParameterError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc), path=path) from exc
        return config

    def log_defaults(self) -> None:
        snapshot = self.to_dict()
        for key in self.defaults_used:
            if key.endswith(".*"):
                logger.info("default %s = %s", key, snapshot.get(key[:-2]))
            elif "." in key:
                section, name = key.split(".", 1)
                logger.info("default %s = %s", key, snapshot[section].get(name))
            else:
                logger.info("default %s = %s", key, snapshot.get(key))

    # =========================================================================
    # Conversions
    # =========================================================================

    def eta_plus(self) -> float:
        ph = self.physics
        if ph.eta_khz is not None:
            return khz_to_angular(ph.eta_khz)
        return (ph.eta_over_gamma or 0.0) * khz_to_angular(ph.gamma_khz)

    def delta(self) -> float:
        ph = self.physics
        if ph.b_field_gauss is not None:
            return zeeman_splitting(ph.b_field_gauss)
        return mhz_to_angular(ph.delta_mhz or 0.0)

    def drive_config(self) -> Optional[DriveConfig]:
        """Coherent drive, or None for the undriven scenario."""
        d = self.drive
        if d is None:
            return None
        try:
            shape = DriveShape(d.shape)
        except ValueError as exc:
            raise ParameterError(f"drive.shape must be 'gaussian' or 'constant', got {d.shape!r}") from exc
        return DriveConfig(
            omega_d_offset=khz_to_angular(d.detuning_khz),
            amp0=sqrt_khz_to_drive(d.amp0_sqrt_khz),
            pulse_center=ns_to_ms(d.center_ns),
            pulse_sigma=ns_to_ms(d.sigma_ns),
            shape=shape,
        )

    def physical_params(self, with_drive: bool = False) -> PhysicalParams:
        """Frame of the cavity: omega_c_offset = 0, omega_a_offset = detuning."""
        ph = self.physics
        eta = self.eta_plus()
        gamma_minus = ph.gamma_khz if ph.gamma_minus_khz is None else ph.gamma_minus_khz
        p = PhysicalParams(
            n_atoms=int(ph.n_atoms),
            g=khz_to_angular(ph.g_khz),
            kappa1=khz_to_angular(ph.kappa1_khz),
            kappa2=khz_to_angular(ph.kappa2_khz),
            gamma_plus=khz_to_angular(ph.gamma_khz),
            gamma_minus=khz_to_angular(gamma_minus),
            eta_plus=eta,
            eta_minus=eta if ph.eta_minus_khz is None else khz_to_angular(ph.eta_minus_khz),
            delta_zeeman=self.delta(),
            omega_a_offset=khz_to_angular(ph.detuning_khz),
            omega_c_offset=0.0,
            drive=self.drive_config() if with_drive else None,
        )
        return validate_params(p)

    @property
    def has_filter_override(self) -> bool:
        return self.filter.chi_hz is not None or self.filter.beta_hz is not None

    def filter_params(self, p: PhysicalParams, expected_width: Optional[float] = None) -> FilterParams:
        base = FilterParams.default_for(p, expected_width=expected_width)
        chi = base.chi if self.filter.chi_hz is None else hz_to_angular(self.filter.chi_hz)
        beta = chi / 10.0 if self.filter.beta_hz is None else hz_to_angular(self.filter.beta_hz)
        return FilterParams(omega_f_offset=0.0, beta=beta, chi=chi)

    def filter_override(self, p: PhysicalParams) -> Optional[FilterParams]:
        """Configured filter, or None to let the emission code size it from the linewidth."""
        return self.filter_params(p) if self.has_filter_override else None

    def integration_config(self) -> IntegrationConfig:
        s = self.integration
        return IntegrationConfig(
            rtol=s.rtol,
            atol=s.atol,
            t_end=s.t_end_ms,
            max_step=float("inf") if s.max_step_ms is None else s.max_step_ms,
            output_stride=s.output_stride_ms,
            method=s.method,
        )

    def to_dict(self) -> dict:
        """Snapshot in the file format; loading it reproduces this config."""
        out = asdict(self.physics)
        for name in _SECTIONS:
            section = getattr(self, name)
            if section is not None:
                out[name] = asdict(section)
        return out


def output_dir(explicit: Optional[Path] = None) -> Path:
    """--out, else $ZEEMAN_LASING_OUT, else ./out."""
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(OUTPUT_ENV)
    return Path(env) if env else Path.cwd() / "out"
