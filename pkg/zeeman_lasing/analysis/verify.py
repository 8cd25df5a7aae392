"""
Self-consistency suite: closed forms against numerics and cumulant
equations against the exact master equation.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..core.data import DriveConfig, DriveShape, IntegrationConfig, Layout, MomentState, PhysicalParams
from ..core.errors import SolverError, ZeemanLasingError
from ..core.layout import driven_names, driven_to_reduced, ground_vacuum_driven, unpack_reduced
from ..cumulant.driven import DrivenEquations
from ..dressed.levels import dressed_levels, eigen_shifts
from ..dynamics.integrate import integrate
from ..exact.moments import exact_moments
from ..exact.oracle import DensityState, ExactSystem
from .dicke import dicke_numbers
from .lasing import lasing_steady_state
from .linewidth import linewidth_semianalytic

logger = logging.getLogger(__name__)

# Driven oracle: output samples over [0, 0.2/kappa], and the magnitude below
# which a moment is compared absolutely
DRIVEN_SAMPLES = 20
DRIVEN_FLOOR = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    error: float
    tolerance: float
    seconds: float = 0.0
    detail: str = ""


def _rel(a: float, b: float, floor: float) -> float:
    return abs(a - b) / max(abs(b), floor)


def check_dressed(p: PhysicalParams, samples: int = 1000, seed: int = 7) -> tuple[float, float, str]:
    """Closed-form dressed shifts against numerical eigenvalues over random parameters."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        q = dataclasses.replace(
            p,
            n_atoms=int(rng.integers(1, 1_000_001)),
            omega_a_offset=p.omega_c_offset + rng.uniform(-1.0, 1.0) * 2 * math.pi * 5e3,
            delta_zeeman=rng.uniform(0.0, 2 * math.pi * 5e3),
            drive=None,
        )
        n = int(rng.integers(0, 6))
        exact = eigen_shifts(q, n)
        closed = np.array([lvl.shift for lvl in dressed_levels(q, n)])
        scale = np.max(np.abs(exact))
        worst = max(worst, float(np.max(np.abs(closed - exact)) / scale))
    return worst, 1e-9, f"{samples} random blocks"


def check_jump_bases(p: PhysicalParams) -> tuple[float, float, str]:
    q = dataclasses.replace(p, n_atoms=2, eta_plus=0.7 * p.gamma_plus, eta_minus=0.3 * p.gamma_plus, drive=None)
    a = ExactSystem(q, n_max=2, basis="bright-dark").generator
    b = ExactSystem(q, n_max=2, basis="zeeman").generator
    scale = max(1.0, abs(a).max())
    return float(abs(a - b).max()) / scale, 1e-12, "bright-dark vs sigma+/- jumps"


def check_linewidth_forms(p: PhysicalParams, steady: MomentState) -> tuple[float, float, str]:
    main = linewidth_semianalytic(p, steady, form="main").value
    general = linewidth_semianalytic(p, steady, form="general").value
    return _rel(general, main, 1e-300), 1e-10, "main vs general form"


def check_dicke_ground(p: PhysicalParams) -> tuple[float, float, str]:
    N = p.n_atoms
    state = MomentState(Layout.DRIVEN, ground_vacuum_driven())
    d = dicke_numbers(state, N)
    expected = math.sqrt(N * (N + 2.0)) / 2.0
    err = max(_rel(d.J_B, expected, 1.0), _rel(d.M_B, -N / 2.0, 1.0), _rel(d.J_D, expected, 1.0))
    return err, 1e-12, "all-ground J = sqrt(N(N+2))/2, M = -N/2"


def check_steady_oracle(p: PhysicalParams, delta: float, n_max: int, cfg: IntegrationConfig) -> tuple[float, float, str]:
    """Exact vs reduced16 steady moments for two atoms at eta = gamma/2."""
    q = dataclasses.replace(p, n_atoms=2, drive=None, delta_zeeman=delta).with_pump(0.5 * p.decay_plus)
    exact = ExactSystem(q, n_max=n_max).steady_state()
    ex = unpack_reduced(driven_to_reduced(exact_moments(exact).values))
    mf = unpack_reduced(lasing_steady_state(q, cfg).state)
    pops = max(abs(ex.p[0, 0]), abs(ex.p[1, 1]), ex.p_gg)
    errs = [
        _rel(mf.n, ex.n, 1e-12),
        _rel(mf.p[0, 0].real, ex.p[0, 0].real, 1e-6 * pops),
        _rel(mf.p[1, 1].real, ex.p[1, 1].real, 1e-6 * pops),
        _rel(mf.p_gg, ex.p_gg, 1e-6 * pops),
        _rel(mf.p[1, 0].imag, ex.p[1, 0].imag, 1e-6 * pops),
    ]
    return max(errs), 0.1, f"N=2, n_max={n_max}, Delta={delta:.4g} rad/ms"


def moment_errors(mf: np.ndarray, ex: np.ndarray, floor: float = DRIVEN_FLOOR) -> np.ndarray:
    """Per-moment relative error; moments below `floor` are compared absolutely against it."""
    return np.abs(mf - ex) / np.maximum(np.abs(ex), floor)


def check_driven_oracle(p: PhysicalParams, n_max: int, cfg: IntegrationConfig) -> tuple[float, float, str]:
    """Every driven102 moment against the exact propagation over a short weak-drive run."""
    drive = DriveConfig(omega_d_offset=p.omega_c_offset, amp0=1e-3 * math.sqrt(p.kappa), shape=DriveShape.CONSTANT)
    q = dataclasses.replace(p, n_atoms=2, drive=drive, eta_plus=0.0, eta_minus=0.0)
    t_end = 0.2 / q.kappa
    run = cfg.replace(
        t_end=t_end,
        output_stride=t_end / DRIVEN_SAMPLES,
        rtol=min(cfg.rtol, 1e-10),
        atol=min(cfg.atol, 1e-14),
    )
    times, states = ExactSystem(q, n_max=n_max).propagate(DensityState.ground_vacuum(2, n_max), run)
    traj = integrate(DrivenEquations(q), ground_vacuum_driven(), run)
    if traj.t.size != times.size:
        raise SolverError(f"output grids differ: {traj.t.size} mean-field vs {times.size} exact samples")
    names = driven_names()
    worst, where = 0.0, ""
    for t, state, mf in zip(times, states, traj.y):
        errs = moment_errors(mf, exact_moments(state).values)
        i = int(np.argmax(errs))
        if errs[i] > worst:
            worst, where = float(errs[i]), f"{names[i]} at t={t:.3g} ms"
    return worst, 1e-3, f"{len(names)} moments, {times.size} times up to 0.2/kappa, worst {where or 'none'}"


def run_verification(
    p: PhysicalParams,
    cfg: Optional[IntegrationConfig] = None,
    n_max: int = 8,
    dressed_samples: int = 1000,
) -> list[CheckResult]:
    """Run every oracle comparison; failures become rows, never exceptions."""
    cfg = cfg or IntegrationConfig()
    delta = p.delta_zeeman if p.delta_zeeman > 0 else 2 * math.pi * 100.0
    balanced = p.with_pump(p.pump_plus if p.pump_plus > 0 else p.decay_plus)

    def linewidth_forms():
        steady = lasing_steady_state(balanced, cfg).moment_state()
        return check_linewidth_forms(balanced, steady)

    checks: list[tuple[str, Callable[[], tuple[float, float, str]]]] = [
        ("dressed shifts", lambda: check_dressed(p, dressed_samples)),
        ("jump bases", lambda: check_jump_bases(p)),
        ("dicke all-ground", lambda: check_dicke_ground(p)),
        ("linewidth forms", linewidth_forms),
        ("steady oracle Delta=0", lambda: check_steady_oracle(p, 0.0, n_max, cfg)),
        ("steady oracle Delta>0", lambda: check_steady_oracle(p, delta, n_max, cfg)),
        ("driven oracle", lambda: check_driven_oracle(p, n_max, cfg)),
    ]
    results = []
    for name, fn in checks:
        start = time.perf_counter()
        try:
            err, tol, detail = fn()
            result = CheckResult(name, bool(err <= tol), float(err), tol, detail=detail)
        except ZeemanLasingError as exc:
            result = CheckResult(name, False, float("nan"), float("nan"), detail=f"error: {exc}")
        result.seconds = time.perf_counter() - start
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, "verify %s: %s (error %.3e, tol %.1e)", name, "pass" if result.passed else "FAIL",
                   result.error, result.tolerance)
        results.append(result)
    return results
