"""
Core functionality - data structures, units, state layouts, generators, errors.
"""

from .data import (
    DriveShape,
    Layout,
    Branch,
    SpectrumKind,
    DriveConfig,
    PhysicalParams,
    FilterParams,
    MomentState,
    DressedLevel,
    PeakPrediction,
    IntegrationConfig,
    SpectrumResult,
    LinewidthEstimate,
    DickePoint,
    RunManifest,
    validate_params,
    to_rotating_frame,
)
from .errors import (
    ZeemanLasingError,
    ParameterError,
    DimensionError,
    LayoutError,
    ConfigError,
    SolverError,
    ConvergenceError,
    SpectrumError,
)
from .layout import (
    driven_to_reduced,
    reduced_to_driven,
    layout_names,
    ground_vacuum_driven,
    ground_vacuum_reduced,
)

__all__ = [
    "DriveShape",
    "Layout",
    "Branch",
    "SpectrumKind",
    "DriveConfig",
    "PhysicalParams",
    "FilterParams",
    "MomentState",
    "DressedLevel",
    "PeakPrediction",
    "IntegrationConfig",
    "SpectrumResult",
    "LinewidthEstimate",
    "DickePoint",
    "RunManifest",
    "validate_params",
    "to_rotating_frame",
    "ZeemanLasingError",
    "ParameterError",
    "DimensionError",
    "LayoutError",
    "ConfigError",
    "SolverError",
    "ConvergenceError",
    "SpectrumError",
    "driven_to_reduced",
    "reduced_to_driven",
    "layout_names",
    "ground_vacuum_driven",
    "ground_vacuum_reduced",
]
