"""
Lindblad generators in row-major vectorization.

vec(A X B) = (A kron B^T) vec(X) for row-major flattening, so a density
matrix reshaped with numpy's default order is acted on directly.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

# Single-atom operators on (g, B, D)
SIGMA = np.zeros((3, 3))
SIGMA[0, 1] = 1.0  # A_gB = |g><B|


def transition(s: int, t: int, dim: int = 3) -> np.ndarray:
    """A_st = |s><t|."""
    op = np.zeros((dim, dim))
    op[s, t] = 1.0
    return op


def lindblad_superoperator(
    hamiltonian,
    channels: Iterable[tuple[Sequence, np.ndarray]],
    sparse: bool = False,
):
    """Generator of d rho/dt = -i[H, rho] + sum_ij C_ij (L_i rho L_j+ - {L_j+ L_i, rho}/2).

    Each channel is (jump operators L_i, coefficient matrix C). A diagonal C
    gives independent dissipators; off-diagonal entries are the cross terms.
    """
    if sparse:
        kron = lambda a, b: sp.kron(a, b, format="csr")
        hamiltonian = sp.csr_matrix(hamiltonian)
        dim = hamiltonian.shape[0]
        eye = sp.identity(dim, format="csr", dtype=complex)
    else:
        kron = np.kron
        hamiltonian = np.asarray(hamiltonian, dtype=complex)
        dim = hamiltonian.shape[0]
        eye = np.eye(dim, dtype=complex)

    gen = -1j * (kron(hamiltonian, eye) - kron(eye, hamiltonian.T))
    for jumps, coeffs in channels:
        coeffs = np.asarray(coeffs)
        for i, li in enumerate(jumps):
            for j, lj in enumerate(jumps):
                c = coeffs[i, j]
                if c == 0:
                    continue
                lj_dag = lj.conj().T
                m = lj_dag @ li
                gen = gen + c * (kron(li, lj.conj()) - 0.5 * (kron(m, eye) + kron(eye, m.T)))
    return gen.tocsr() if sparse else gen


def atom_channels(decay: tuple[float, float], pump: tuple[float, float], embed=None):
    """Decay and pump channels of one atom in the bright-dark basis.

    decay = (Gamma_+, Gamma_-), pump = (Lambda_+, Lambda_-). `embed` lifts a
    3x3 operator into a larger space (identity when None).
    """
    lift = embed if embed is not None else (lambda op: op)
    dec = [lift(transition(0, 1)), lift(transition(0, 2))]
    pmp = [lift(transition(1, 0)), lift(transition(2, 0))]
    c_dec = np.array([[decay[0], decay[1]], [decay[1], decay[0]]])
    c_pmp = np.array([[pump[0], pump[1]], [pump[1], pump[0]]])
    return [(dec, c_dec), (pmp, c_pmp)]


def zeeman_channels(gamma: tuple[float, float], eta: tuple[float, float], embed=None):
    """The same dissipators written with the sigma+/sigma- excited levels.

    |e+-> = (|B> +- |D>)/sqrt(2); jumps sqrt(gamma_+-) A_g,e+- and
    sqrt(eta_+-) A_e+-,g with independent (diagonal) rates.
    """
    lift = embed if embed is not None else (lambda op: op)
    s = 1.0 / np.sqrt(2.0)
    down_p = s * (transition(0, 1) + transition(0, 2))
    down_m = s * (transition(0, 1) - transition(0, 2))
    up_p = down_p.T.copy()
    up_m = down_m.T.copy()
    return [
        ([lift(down_p), lift(down_m)], np.diag(gamma)),
        ([lift(up_p), lift(up_m)], np.diag(eta)),
    ]


def single_atom_hamiltonian(omega_a: float, delta: float) -> np.ndarray:
    """h = w_a (|B><B| + |D><D|) + (Delta/2)(|B><D| + |D><B|)."""
    h = np.zeros((3, 3))
    h[1, 1] = h[2, 2] = omega_a
    h[1, 2] = h[2, 1] = 0.5 * delta
    return h


def apply_superoperator(gen: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply a dense generator to a square matrix."""
    dim = x.shape[0]
    return (gen @ x.reshape(-1)).reshape(dim, dim)
