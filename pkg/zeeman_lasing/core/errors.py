"""
Exception hierarchy shared by all zeeman_lasing modules.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import numpy as np


class ZeemanLasingError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(ZeemanLasingError, ValueError):
    """Invalid physical or numerical parameters."""


class DimensionError(ParameterError):
    """Exact-oracle Hilbert space too large."""


class LayoutError(ZeemanLasingError, ValueError):
    """State vector has the wrong layout or length."""


class ConfigError(ZeemanLasingError):
    """Configuration file could not be read or validated."""

    def __init__(
        self,
        message: str,
        path: Optional[Path] = None,
        line: Optional[int] = None,
        suggestions: Sequence[str] = (),
    ):
        self.path = path
        self.line = line
        self.suggestions = list(suggestions)
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        hint = ""
        if self.suggestions:
            hint = f" (did you mean {', '.join(repr(s) for s in self.suggestions)}?)"
        super().__init__(f"{where}{message}{hint}")


class SolverError(ZeemanLasingError):
    """Numerical integration or root solve failed."""


class ConvergenceError(SolverError):
    """Steady state not reached; carries the best state found."""

    def __init__(self, message: str, state: Optional[np.ndarray] = None, residual: float = float("nan")):
        super().__init__(message)
        self.state = state
        self.residual = residual


class SpectrumError(SolverError):
    """Spectral post-processing could not produce a trustworthy result."""
