"""
Driven second-order mean-field equations for identical atoms.

The state holds <a>, <aa>, <a+a>, the single-atom density matrix rho1, the
atom-photon block Y = <a A_st> and the two-atom density matrix rho2 of one
representative ordered pair. Sums over atoms become N (same atom) and N-1
(other atoms). Equations are written in the frame of the drive carrier.
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np

from ..core.data import Layout, MomentState, PhysicalParams, validate_params
from ..core.layout import B, G, DrivenMoments, pack_driven, unpack_driven
from ..core.superop import (
    SIGMA,
    apply_superoperator,
    atom_channels,
    lindblad_superoperator,
    single_atom_hamiltonian,
)
from .closure import number_atom, pair_photon_atom, photon_atom_atom

logger = logging.getLogger(__name__)

I3 = np.eye(3)


class DrivenEquations:
    """Right-hand side of the driven moment equations.

    Handles:
    - Cavity field <a>, <aa>, <a+a> with the drive through the left mirror
    - Single-atom and pair generators including the bright-dark cross dissipators
    - Atom-photon correlations <a A_st> with third-order moments closed
    """

    def __init__(self, p: PhysicalParams):
        validate_params(p)
        self.p = p
        self.n_atoms = p.n_atoms
        self.coupling = p.bright_coupling
        self.kappa = p.kappa
        self.sqrt_kappa1 = np.sqrt(p.kappa1)
        self.omega_a, self.omega_c = p.frame_offsets()

        decay = (p.decay_plus, p.decay_minus)
        pump = (p.pump_plus, p.pump_minus)
        h1 = single_atom_hamiltonian(self.omega_a, p.delta_zeeman)
        self.gen1 = lindblad_superoperator(h1, atom_channels(decay, pump))

        h2 = np.kron(h1, I3) + np.kron(I3, h1)
        channels2 = atom_channels(decay, pump, embed=lambda op: np.kron(op, I3))
        channels2 += atom_channels(decay, pump, embed=lambda op: np.kron(I3, op))
        self.gen2 = lindblad_superoperator(h2, channels2)

        self.sigma = SIGMA.astype(complex)
        self.sigma_pair = np.kron(SIGMA, I3) + np.kron(I3, SIGMA)
        self.evaluations = 0

    def drive(self, t: float) -> float:
        """F(t) = sqrt(kappa1) Omega(t)."""
        if self.p.drive is None:
            return 0.0
        return self.sqrt_kappa1 * self.p.drive.amplitude(t)

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.rhs(t, y)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        self.evaluations += 1
        m = unpack_driven(y)
        N, Gc, kappa = self.n_atoms, self.coupling, self.kappa
        F = self.drive(t)
        wc = self.omega_c
        sig = self.sigma
        sig_d = sig.conj().T
        alpha, beta2, n, rho1, Y, rho2 = m

        # cavity field
        d_alpha = -(1j * wc + 0.5 * kappa) * alpha - 1j * F - 1j * Gc * N * rho1[B, G]
        d_beta2 = -(2j * wc + kappa) * beta2 - 2j * F * alpha - 2j * Gc * N * Y[B, G]
        d_n = -kappa * n - 2.0 * F * alpha.imag - 2.0 * Gc * N * Y[G, B].imag

        # single atom
        Y_d = Y.conj().T
        d_rho1 = apply_superoperator(self.gen1, rho1)
        d_rho1 += 1j * Gc * ((Y @ sig_d - sig_d @ Y) + (Y_d @ sig - sig @ Y_d))

        # atom-photon; M[t, s] = <A_st A'_gB> couples through the other N-1 atoms
        z_aa = pair_photon_atom(alpha, beta2, Y, rho1)
        z_n = number_atom(n, alpha, Y, rho1)
        pair = rho2.reshape(3, 3, 3, 3)[:, B, :, G]
        d_Y = -(1j * wc + 0.5 * kappa) * Y - 1j * F * rho1 + apply_superoperator(self.gen1, Y)
        d_Y += 1j * Gc * ((z_aa @ sig_d - sig_d @ z_aa) + (z_n @ sig - sig @ z_n))
        d_Y -= 1j * Gc * (sig @ rho1)
        d_Y -= 1j * Gc * (N - 1) * pair

        # atom pair
        S = self.sigma_pair
        S_d = S.conj().T
        T = photon_atom_atom(alpha, Y, rho1, rho2)
        T_d = T.conj().T
        d_rho2 = apply_superoperator(self.gen2, rho2)
        d_rho2 += 1j * Gc * ((T @ S_d - S_d @ T) + (T_d @ S - S @ T_d))

        return pack_driven(DrivenMoments(d_alpha, d_beta2, d_n, d_rho1, d_Y, d_rho2))


@lru_cache(maxsize=32)
def _equations(p: PhysicalParams) -> DrivenEquations:
    return DrivenEquations(p)


def driven_rhs(p: PhysicalParams, t: float, s: MomentState) -> MomentState:
    """d/dt of a driven-layout state."""
    s.expect(Layout.DRIVEN)
    return MomentState(Layout.DRIVEN, _equations(p).rhs(t, s.values))
