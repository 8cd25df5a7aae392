"""
Exact master-equation oracle for a few atoms and a truncated photon space.

The Hilbert space is {g, B, D}^N (atoms first) times Fock(0..n_max). The
Liouvillian is assembled sparsely from Kronecker products and acts on the
row-major vectorized density matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from ..core.data import DriveConfig, DriveShape, IntegrationConfig, PhysicalParams, validate_params
from ..core.errors import DimensionError, ParameterError, SolverError
from ..core.superop import (
    SIGMA,
    atom_channels,
    lindblad_superoperator,
    single_atom_hamiltonian,
    zeeman_channels,
)
from ..dynamics.integrate import integrate

logger = logging.getLogger(__name__)

MAX_ATOMS = 3
MAX_PHOTONS = 12


def destroy(n_levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_levels)), 1)


@dataclass
class DensityState:
    """Density matrix over {g,B,D}^N x Fock(n_max)."""
    n_atoms: int
    n_max: int
    rho: np.ndarray

    def __post_init__(self):
        dim = 3 ** self.n_atoms * (self.n_max + 1)
        if self.rho.shape != (dim, dim):
            raise ParameterError(f"rho must be {dim}x{dim} for N={self.n_atoms}, n_max={self.n_max}")

    @property
    def dims(self) -> list[int]:
        return [3] * self.n_atoms + [self.n_max + 1]

    def diagnostics(self) -> dict:
        """Trace error, hermiticity error and smallest eigenvalue."""
        herm = 0.5 * (self.rho + self.rho.conj().T)
        return {
            "trace_error": float(abs(np.trace(self.rho) - 1.0)),
            "hermiticity_error": float(np.max(np.abs(self.rho - self.rho.conj().T))),
            "min_eigenvalue": float(np.min(np.linalg.eigvalsh(herm))),
        }

    def is_valid(self, trace_tol: float = 1e-10, herm_tol: float = 1e-12, pos_tol: float = 1e-8) -> bool:
        d = self.diagnostics()
        return d["trace_error"] < trace_tol and d["hermiticity_error"] < herm_tol and d["min_eigenvalue"] > -pos_tol

    @classmethod
    def from_pure(cls, n_atoms: int, n_max: int, psi: np.ndarray) -> DensityState:
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(n_atoms, n_max, np.outer(psi, psi.conj()))

    @classmethod
    def product(cls, levels: list[int], n_max: int, photons: int = 0) -> DensityState:
        """Pure product state |levels[0] ... levels[N-1]> |photons>."""
        psi = np.array([1.0 + 0j])
        for lvl in levels:
            psi = np.kron(psi, np.eye(3)[lvl])
        psi = np.kron(psi, np.eye(n_max + 1)[photons])
        return cls.from_pure(len(levels), n_max, psi)

    @classmethod
    def ground_vacuum(cls, n_atoms: int, n_max: int) -> DensityState:
        return cls.product([0] * n_atoms, n_max)


class ExactSystem:
    """Sparse Liouvillian of the full master equation.

    Handles:
    - Atom, cavity and atom-cavity Hamiltonian in the rotating frame
    - Constant drive through the left mirror
    - Cavity loss, spontaneous decay and incoherent pumping, with the
      bright-dark cross dissipators (or the equivalent sigma+/sigma- jumps)
    """

    def __init__(
        self,
        p: PhysicalParams,
        n_atoms: Optional[int] = None,
        n_max: int = 6,
        drive: Optional[DriveConfig] = None,
        basis: str = "bright-dark",
    ):
        validate_params(p)
        n_atoms = p.n_atoms if n_atoms is None else n_atoms
        if n_atoms < 1 or n_atoms > MAX_ATOMS:
            raise DimensionError(f"exact oracle supports 1..{MAX_ATOMS} atoms, got {n_atoms}")
        if n_max < 1 or n_max > MAX_PHOTONS:
            raise DimensionError(f"photon cutoff must be in 1..{MAX_PHOTONS}, got {n_max}")
        if basis not in ("bright-dark", "zeeman"):
            raise ParameterError(f"unknown jump basis {basis!r}")
        drive = p.drive if drive is None else drive
        if drive is not None and drive.shape != DriveShape.CONSTANT:
            raise ParameterError("exact oracle supports a constant drive only")

        self.p = p
        self.n_atoms = n_atoms
        self.n_max = n_max
        self.n_field = n_max + 1
        self.dim = 3 ** n_atoms * self.n_field
        self.basis = basis

        self.a = self._lift(destroy(self.n_field), None)
        ref = drive.omega_d_offset if drive is not None else 0.0
        w_a = p.omega_a_offset - ref
        w_c = p.omega_c_offset - ref
        h1 = single_atom_hamiltonian(w_a, p.delta_zeeman)
        a_dag = self.a.conj().T
        G = p.bright_coupling

        H = w_c * (a_dag @ self.a)
        for k in range(n_atoms):
            H = H + self.atom_operator(k, h1)
            sigma = self.atom_operator(k, SIGMA)
            H = H + G * (self.a @ sigma.conj().T + a_dag @ sigma)
        channels = self.jump_operators(basis)
        if drive is not None:
            F = np.sqrt(p.kappa1) * drive.amp0
            H = H + F * (self.a + a_dag)
        self.hamiltonian = sp.csr_matrix(H)
        self.generator = lindblad_superoperator(self.hamiltonian, channels, sparse=True)
        logger.debug("exact generator: dim %d, %d nonzeros", self.dim, self.generator.nnz)

    def _lift(self, field_op: Optional[np.ndarray], atom_ops: Optional[dict]) -> sp.csr_matrix:
        factors = [sp.identity(3, format="csr")] * self.n_atoms + [sp.identity(self.n_field, format="csr")]
        if atom_ops:
            for k, op in atom_ops.items():
                factors[k] = sp.csr_matrix(op)
        if field_op is not None:
            factors[-1] = sp.csr_matrix(field_op)
        out = factors[0]
        for f in factors[1:]:
            out = sp.kron(out, f, format="csr")
        return out.astype(complex)

    def atom_operator(self, k: int, op: np.ndarray) -> sp.csr_matrix:
        return self._lift(None, {k: op})

    def jump_operators(self, basis: str = "bright-dark") -> list:
        """Dissipation channels (jumps, rate matrix) for the cavity and every atom.

        "bright-dark" uses the cross-coupled decay and pump channels;
        "zeeman" the independent sigma+/sigma- jumps. Both give the same generator.
        """
        p = self.p
        channels = [([self.a], np.array([[p.kappa]]))]
        for k in range(self.n_atoms):
            lift = lambda op, k=k: self.atom_operator(k, op)
            if basis == "bright-dark":
                channels += atom_channels((p.decay_plus, p.decay_minus), (p.pump_plus, p.pump_minus), embed=lift)
            elif basis == "zeeman":
                channels += zeeman_channels((p.gamma_plus, p.gamma_minus), (p.eta_plus, p.eta_minus), embed=lift)
            else:
                raise ParameterError(f"unknown jump basis {basis!r}")
        return channels

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """L(rho) as a matrix."""
        return (self.generator @ rho.reshape(-1)).reshape(self.dim, self.dim)

    def steady_state(self) -> DensityState:
        """Null vector of L normalized to unit trace (one equation replaced by the trace)."""
        trace_idx = np.arange(self.dim) * (self.dim + 1)
        lhs = self.generator.tolil()
        lhs[0, :] = 0
        lhs[0, trace_idx] = 1.0
        rhs = np.zeros(self.dim * self.dim, dtype=complex)
        rhs[0] = 1.0
        vec = spsolve(lhs.tocsc(), rhs)
        rho = vec.reshape(self.dim, self.dim)
        rho = 0.5 * (rho + rho.conj().T)
        return DensityState(self.n_atoms, self.n_max, rho / np.trace(rho).real)

    def propagate(
        self,
        d0: DensityState,
        cfg: IntegrationConfig,
        strict: bool = False,
    ) -> tuple[np.ndarray, list[DensityState]]:
        """Integrate d rho/dt = L rho; returns output times and states.

        Every output state is checked for unit trace, hermiticity and
        positivity. The first failing step is logged at WARNING, or raised
        as SolverError when strict.
        """
        gen = self.generator
        traj = integrate(lambda t, v: gen @ v, d0.rho.reshape(-1).astype(complex), cfg)
        states = [DensityState(self.n_atoms, self.n_max, v.reshape(self.dim, self.dim)) for v in traj.y]
        for t, state in zip(traj.t, states):
            if state.is_valid():
                continue
            d = state.diagnostics()
            message = (
                f"density matrix invalid at t={t:.6g} ms: trace error {d['trace_error']:.2e}, "
                f"hermiticity error {d['hermiticity_error']:.2e}, min eigenvalue {d['min_eigenvalue']:.2e}"
            )
            if strict:
                raise SolverError(message)
            logger.warning(message)
            break
        return traj.t, states


def build_generator(
    p: PhysicalParams,
    n_atoms: int,
    n_max: int,
    drive: Optional[DriveConfig] = None,
    basis: str = "bright-dark",
) -> sp.csr_matrix:
    """Sparse Liouvillian acting on row-major vectorized density matrices."""
    return ExactSystem(p, n_atoms=n_atoms, n_max=n_max, drive=drive, basis=basis).generator
