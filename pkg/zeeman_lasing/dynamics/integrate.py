"""
Adaptive time integration of moment or density-matrix equations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.integrate import solve_ivp

from ..core.data import IntegrationConfig, Layout, MomentState
from ..core.errors import LayoutError, SolverError
from ..core.layout import layout_names

logger = logging.getLogger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]


@dataclass
class Trajectory:
    """Time-stamped states; y has one row per output time."""
    t: np.ndarray
    y: np.ndarray
    layout: Optional[Layout] = None
    nfev: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.y[-1]

    def final_state(self) -> MomentState:
        if self.layout is None:
            raise LayoutError("trajectory has no moment layout")
        return MomentState(self.layout, np.real(self.final))

    def column_names(self) -> list[str]:
        if self.layout is not None:
            return layout_names(self.layout)
        return [f"y{i}" for i in range(self.y.shape[1])]

    def to_rows(self, names: Optional[Sequence[str]] = None) -> tuple[list[str], list[list[float]]]:
        """Header (t_ms plus one column per moment) and rows for CSV export."""
        names = list(names) if names is not None else self.column_names()
        if len(names) != self.y.shape[1]:
            raise LayoutError(f"{len(names)} column names for {self.y.shape[1]} state components")
        rows = [[float(t)] + [float(v) for v in np.real(row)] for t, row in zip(self.t, self.y)]
        return ["t_ms"] + names, rows


def output_times(cfg: IntegrationConfig, t0: float = 0.0) -> Optional[np.ndarray]:
    if cfg.output_stride is None:
        return None
    n = int(np.floor((cfg.t_end - t0) / cfg.output_stride + 1e-9))
    times = np.minimum(t0 + cfg.output_stride * np.arange(n + 1), cfg.t_end)
    if cfg.t_end - times[-1] > 1e-9 * cfg.output_stride:
        times = np.append(times, cfg.t_end)
    return times


def integrate(
    rhs: Rhs,
    s0: Union[MomentState, np.ndarray],
    cfg: IntegrationConfig,
    t0: float = 0.0,
    layout: Optional[Layout] = None,
) -> Trajectory:
    """Integrate from t0 to cfg.t_end with the configured embedded Runge-Kutta method.

    Output is sampled every cfg.output_stride (dense output), or only at the
    end points when no stride is set.
    """
    if isinstance(s0, MomentState):
        layout = s0.layout
        y0 = s0.values
    else:
        y0 = np.asarray(s0)
    dy0 = np.asarray(rhs(t0, y0))
    if dy0.shape != y0.shape:
        raise LayoutError(f"rhs returns shape {dy0.shape} for a state of shape {y0.shape}")

    t_eval = output_times(cfg, t0)
    sol = solve_ivp(
        rhs,
        (t0, cfg.t_end),
        y0,
        method=cfg.method,
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
        t_eval=t_eval,
    )
    if not sol.success:
        reached = sol.t[-1] if len(sol.t) else t0
        raise SolverError(
            f"{cfg.method} integration stopped at t={reached:.6g} ms after {sol.nfev} evaluations: "
            f"{sol.message} (stiff regime? try method='LSODA')"
        )
    y = sol.y.T
    if not np.all(np.isfinite(y)):
        bad = int(np.argmax(~np.all(np.isfinite(y), axis=1)))
        raise SolverError(f"non-finite state at t={sol.t[bad]:.6g} ms")
    logger.debug("%s: t=[%g, %g] ms, %d evaluations, %d outputs", cfg.method, t0, cfg.t_end, sol.nfev, len(sol.t))
    return Trajectory(t=sol.t, y=y, layout=layout, nfev=int(sol.nfev), diagnostics={"message": sol.message})
