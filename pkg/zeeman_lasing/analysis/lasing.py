"""
Steady state of the pumped, undriven ensemble.
"""

from __future__ import annotations

import logging
from typing import Optional

from ..core.data import IntegrationConfig, Layout, MomentState, PhysicalParams
from ..core.errors import ParameterError
from ..core.layout import ground_vacuum_reduced, reduced_population_row
from ..cumulant.reduced import ReducedEquations
from ..dynamics.integrate import Trajectory, integrate
from ..dynamics.steady import STEADY_TOL, SteadyState, steady_state

logger = logging.getLogger(__name__)


def _undriven(p: PhysicalParams) -> ReducedEquations:
    if p.drive is not None and p.drive.amp0 != 0:
        raise ParameterError("the coherence-free equations describe the undriven system; remove the drive")
    return ReducedEquations(p)


def lasing_steady_state(
    p: PhysicalParams,
    cfg: Optional[IntegrationConfig] = None,
    s0: Optional[MomentState] = None,
    tol: float = STEADY_TOL,
    raise_on_failure: bool = False,
) -> SteadyState:
    """Reduced16 steady state, marched from s0 (all-ground vacuum by default)."""
    cfg = cfg or IntegrationConfig()
    eq = _undriven(p)
    start = s0 if s0 is not None else MomentState(Layout.REDUCED, ground_vacuum_reduced())
    start.expect(Layout.REDUCED)
    result = steady_state(
        eq,
        start,
        cfg,
        tol=tol,
        constraints=reduced_population_row()[None, :],
        raise_on_failure=raise_on_failure,
    )
    result.nfev = eq.evaluations
    return result


def lasing_trajectory(p: PhysicalParams, cfg: IntegrationConfig, s0: Optional[MomentState] = None) -> Trajectory:
    """Relaxation from s0 towards the steady state, sampled every cfg.output_stride."""
    eq = _undriven(p)
    start = s0 if s0 is not None else MomentState(Layout.REDUCED, ground_vacuum_reduced())
    return integrate(eq, start, cfg)
