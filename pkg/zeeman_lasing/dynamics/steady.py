"""
Steady states by time-marching followed by a damped Newton polish.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ..core.data import IntegrationConfig, Layout, MomentState
from ..core.errors import ConvergenceError
from .integrate import integrate

logger = logging.getLogger(__name__)

Fun = Callable[[np.ndarray], np.ndarray]

STEADY_TOL = 1e-10
# Relative residual at which a Newton polish is attempted during the march
NEWTON_START = 1e-2


@dataclass
class SteadyState:
    state: np.ndarray
    residual: float
    converged: bool
    march_residual: float
    newton_iterations: int = 0
    t_marched: float = 0.0
    nfev: int = 0
    stable: Optional[bool] = None
    layout: Optional[Layout] = None

    def moment_state(self) -> MomentState:
        return MomentState(self.layout, self.state)

    def diagnostics(self) -> dict:
        return {
            "residual": self.residual,
            "march_residual": self.march_residual,
            "converged": self.converged,
            "newton_iterations": self.newton_iterations,
            "t_marched_ms": self.t_marched,
            "nfev": self.nfev,
            "stable": self.stable,
        }


def relative_residual(f: np.ndarray, x: np.ndarray) -> float:
    return float(np.linalg.norm(f)) / (1.0 + float(np.linalg.norm(x)))


def fd_jacobian(fun: Fun, x: np.ndarray, f0: Optional[np.ndarray] = None, rel_step: float = 1e-7) -> np.ndarray:
    """Forward-difference Jacobian."""
    f0 = fun(x) if f0 is None else f0
    floor = 1e-6 * (1.0 + float(np.max(np.abs(x))))
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        h = rel_step * max(abs(x[j]), floor)
        xp = x.copy()
        xp[j] += h
        jac[:, j] = (fun(xp) - f0) / h
    return jac


def newton_polish(
    fun: Fun,
    x: np.ndarray,
    tol: float = STEADY_TOL,
    constraints: Optional[np.ndarray] = None,
    max_iter: int = 30,
) -> tuple[np.ndarray, float, int]:
    """Damped Newton on fun(x) = 0; returns (x, relative residual, iterations).

    Rows of `constraints` are conserved directions: the step is solved in
    least squares together with constraints @ dx = 0, which also handles the
    singular Jacobian those conservation laws produce.
    """
    x = np.array(x, dtype=float)
    f = fun(x)
    r = relative_residual(f, x)
    it = 0
    for it in range(1, max_iter + 1):
        if r <= tol:
            it -= 1
            break
        jac = fd_jacobian(fun, x, f)
        lhs, rhs = jac, -f
        if constraints is not None:
            lhs = np.vstack([jac, constraints])
            rhs = np.concatenate([-f, np.zeros(constraints.shape[0])])
        dx = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
        lam = 1.0
        while lam >= 1e-4:
            xn = x + lam * dx
            fn = fun(xn)
            rn = relative_residual(fn, xn)
            if np.isfinite(rn) and rn < r:
                break
            lam *= 0.5
        else:
            logger.debug("newton: no descent at iteration %d (residual %.3e)", it, r)
            break
        x, f, r = xn, fn, rn
        logger.debug("newton %d: residual %.3e (damping %.3g)", it, r, lam)
    return x, r, it


def is_stable(fun: Fun, x: np.ndarray, constraints: Optional[np.ndarray] = None) -> bool:
    """Linear stability: no Jacobian eigenvalue with positive real part.

    Zero modes from conservation laws (one per constraint row) are ignored.
    """
    jac = fd_jacobian(fun, x)
    evals = np.linalg.eigvals(jac)
    scale = max(1.0, float(np.max(np.abs(evals))))
    n_zero = 0 if constraints is None else constraints.shape[0]
    remaining = evals[np.argsort(np.abs(evals))][n_zero:]
    if remaining.size == 0:
        return True
    return bool(np.max(remaining.real) <= 1e-7 * scale)


def steady_state(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    s0: Union[MomentState, np.ndarray],
    cfg: IntegrationConfig,
    tol: float = STEADY_TOL,
    newton: bool = True,
    constraints: Optional[np.ndarray] = None,
    chunks: int = 100,
    raise_on_failure: bool = False,
) -> SteadyState:
    """Steady state of an autonomous rhs.

    Marches in chunks of cfg.t_end / chunks until the relative residual
    |rhs(s)| / (1 + |s|) drops below tol. Once it is below NEWTON_START a
    Newton polish is tried; its result is accepted when it converges to a
    linearly stable point, otherwise the march continues.
    """
    layout = s0.layout if isinstance(s0, MomentState) else None
    x = np.array(s0.values if isinstance(s0, MomentState) else s0, dtype=float)
    fun = lambda y: np.asarray(rhs(0.0, y))
    chunk_cfg = cfg.replace(t_end=cfg.t_end / chunks, output_stride=None)

    r = relative_residual(fun(x), x)
    t_marched, nfev, iterations = 0.0, 0, 0
    march_r = r
    stable: Optional[bool] = None
    tried_at = np.inf
    while r > tol and t_marched < cfg.t_end * (1 - 1e-12):
        traj = integrate(rhs, x, chunk_cfg)
        x = np.real(traj.final)
        t_marched += chunk_cfg.t_end
        nfev += traj.nfev
        r = relative_residual(fun(x), x)
        march_r = r
        if newton and r <= NEWTON_START and r < 0.1 * tried_at:
            tried_at = r
            xn, rn, its = newton_polish(fun, x, tol, constraints)
            iterations += its
            if rn <= tol and is_stable(fun, xn, constraints):
                x, r, stable = xn, rn, True
                break
    if newton and r > tol:
        xn, rn, its = newton_polish(fun, x, tol, constraints)
        iterations += its
        if rn < r:
            x, r = xn, rn

    converged = r <= tol
    if stable is None and converged and newton:
        stable = is_stable(fun, x, constraints)
    result = SteadyState(
        state=x,
        residual=r,
        converged=converged,
        march_residual=march_r,
        newton_iterations=iterations,
        t_marched=t_marched,
        nfev=nfev,
        stable=stable,
        layout=layout,
    )
    if converged:
        logger.info("steady state: residual %.3e after %.3g ms march, %d Newton steps", r, t_marched, iterations)
    else:
        logger.warning("steady state not converged: residual %.3e (tol %.1e) after %.3g ms", r, tol, t_marched)
        if raise_on_failure:
            raise ConvergenceError(f"steady state not converged (residual {r:.3e})", state=x, residual=r)
    return result
