"""
Filter-cavity extension of the coherence-free equations.

The filter mode b (frequency omega_f, loss chi) couples to the cavity with
strength beta. For small beta the main system is solved first and held
fixed; the filter moments <b+b>, <b+a>, <b+A_gr> then obey a linear
system whose steady state gives one point of the emission spectrum.
"""

from __future__ import annotations

import logging

import numpy as np

from ..core.data import FILTER_SIZE, REDUCED_SIZE, FilterParams, Layout, MomentState, PhysicalParams, validate_params
from ..core.errors import ConvergenceError, LayoutError
from ..core.layout import FilterMoments, pack_filter, unpack_filter, unpack_reduced
from .reduced import reduced_derivative

logger = logging.getLogger(__name__)

# Relative residual above which a main-system state is not accepted as steady
STEADY_RESIDUAL_TOL = 1e-6


def filter_derivative(p: PhysicalParams, f: FilterParams, main: np.ndarray, fs: np.ndarray) -> np.ndarray:
    """d/dt of the filter block for frozen main-system moments `main`."""
    m = unpack_reduced(main)
    z = unpack_filter(fs)
    Gc = p.bright_coupling
    N = p.n_atoms
    gp, gm, lp = p.decay_plus, p.decay_minus, p.pump_plus
    half = 0.5 * p.delta_zeeman
    wf_c = f.omega_f_offset - p.omega_c_offset
    wf_a = f.omega_f_offset - p.omega_a_offset

    d_nb = -f.chi * z.n_b + 2.0 * f.beta * z.x.imag
    d_x = (
        (1j * wf_c - 0.5 * (f.chi + p.kappa)) * z.x
        - 1j * f.beta * (z.n_b - m.n)
        - 1j * Gc * N * z.u[0]
    )
    d_u = np.zeros(2, dtype=complex)
    for r, rb in ((0, 1), (1, 0)):
        bright = 1.0 if r == 0 else 0.0
        d_u[r] = (
            (1j * wf_a - 0.5 * f.chi - lp - 0.5 * gp) * z.u[r]
            - (1j * half + 0.5 * gm) * z.u[rb]
            + 1j * f.beta * np.conj(m.y[r])
            - 1j * Gc * z.x * (bright * m.p_gg - m.p[0, r])
        )
    return pack_filter(FilterMoments(d_nb, d_x, d_u))


def check_steady(p: PhysicalParams, main: np.ndarray, tol: float = STEADY_RESIDUAL_TOL) -> float:
    """Residual of the main system; raises ConvergenceError above tol * (1 + |s|)."""
    residual = float(np.linalg.norm(reduced_derivative(p, unpack_reduced(main))))
    if residual > tol * (1.0 + float(np.linalg.norm(main))):
        raise ConvergenceError(
            f"main system not at steady state (residual {residual:.3e})", state=main, residual=residual
        )
    return residual


class FilterSystem:
    """Linear filter equations around one frozen main-system steady state.

    The filter block obeys dz/dt = A z + c; A and c are read off the
    derivative by evaluating it at zero and at the unit vectors.
    """

    def __init__(self, p: PhysicalParams, f: FilterParams, main_steady: MomentState, check: bool = True):
        validate_params(p, require_cavity=True)
        main_steady.expect(Layout.REDUCED)
        if f.beta > p.kappa / 100.0:
            logger.warning("filter beta=%.3e exceeds kappa/100; back-action is no longer negligible", f.beta)
        self.p = p
        self.f = f
        self.main = main_steady.values
        self.residual = check_steady(p, self.main) if check else float("nan")
        self.offset = self.derivative(np.zeros(FILTER_SIZE))
        self.matrix = np.column_stack(
            [self.derivative(e) - self.offset for e in np.eye(FILTER_SIZE)]
        )

    def derivative(self, fs: np.ndarray) -> np.ndarray:
        return filter_derivative(self.p, self.f, self.main, fs)

    def __call__(self, t: float, fs: np.ndarray) -> np.ndarray:
        return self.derivative(fs)

    def steady_state(self) -> np.ndarray:
        return np.linalg.solve(self.matrix, -self.offset)

    def photon_number(self) -> float:
        return float(self.steady_state()[0])


def filter_rhs(p: PhysicalParams, f: FilterParams, main_steady: MomentState, fs: np.ndarray) -> np.ndarray:
    """d/dt of the filter block with the main system frozen at a converged steady state."""
    main_steady.expect(Layout.REDUCED)
    check_steady(p, main_steady.values)
    return filter_derivative(p, f, main_steady.values, np.asarray(fs, dtype=float))


def filter_steady_state(p: PhysicalParams, f: FilterParams, main_steady: MomentState) -> FilterMoments:
    return unpack_filter(FilterSystem(p, f, main_steady).steady_state())


def filter_photon_number(p: PhysicalParams, f: FilterParams, main_steady: MomentState, check: bool = True) -> float:
    """Steady <b+b> for one filter frequency."""
    return FilterSystem(p, f, main_steady, check=check).photon_number()


class CascadedEquations:
    """Main system and filter integrated together (reduced16+filter layout).

    The filter block follows the instantaneous main moments without acting
    back on them.
    """

    layout = Layout.REDUCED_FILTER

    def __init__(self, p: PhysicalParams, f: FilterParams):
        validate_params(p, require_cavity=True)
        self.p = p
        self.f = f
        self.size = REDUCED_SIZE + FILTER_SIZE
        self.evaluations = 0

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.rhs(t, y)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        if y.shape != (self.size,):
            raise LayoutError(f"{self.layout.value} vector needs {self.size} values, got shape {y.shape}")
        self.evaluations += 1
        main, fs = y[:REDUCED_SIZE], y[REDUCED_SIZE:]
        return np.concatenate([
            reduced_derivative(self.p, unpack_reduced(main)),
            filter_derivative(self.p, self.f, main, fs),
        ])
