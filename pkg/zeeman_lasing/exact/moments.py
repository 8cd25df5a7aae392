"""
Moments of an exact density matrix in the cumulant layouts.
"""

from __future__ import annotations

import itertools
import string

import numpy as np

from ..core.data import Layout, MomentState
from ..core.layout import DrivenMoments, driven_to_reduced, pack_driven
from .oracle import DensityState, destroy


def partial_trace(rho: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    """Reduced matrix on subsystems `keep`, in the order given."""
    n = len(dims)
    letters = string.ascii_letters
    row = [letters[i] for i in range(n)]
    col = [letters[n + i] if i in keep else letters[i] for i in range(n)]
    out = [letters[i] for i in keep] + [letters[n + i] for i in keep]
    expr = "".join(row + col) + "->" + "".join(out)
    reduced = np.einsum(expr, rho.reshape(dims + dims))
    size = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(size, size)


def exact_moments(d: DensityState) -> MomentState:
    """Driven-layout moments, averaged over atoms and over ordered atom pairs.

    With a single atom there is no pair; the pair block is then the product
    rho1 (x) rho1.
    """
    dims = d.dims
    N = d.n_atoms
    field = N
    a = destroy(d.n_max + 1)
    rho_f = partial_trace(d.rho, dims, [field])
    alpha = complex(np.trace(rho_f @ a))
    beta2 = complex(np.trace(rho_f @ a @ a))
    n = float(np.trace(rho_f @ a.conj().T @ a).real)

    a_full = np.kron(np.eye(3 ** N), a)
    a_rho = a_full @ d.rho
    rho1 = np.mean([partial_trace(d.rho, dims, [k]) for k in range(N)], axis=0)
    Y = np.mean([partial_trace(a_rho, dims, [k]) for k in range(N)], axis=0)
    pairs = list(itertools.permutations(range(N), 2))
    if pairs:
        rho2 = np.mean([partial_trace(d.rho, dims, list(pair)) for pair in pairs], axis=0)
    else:
        rho2 = np.kron(rho1, rho1)
    return MomentState(Layout.DRIVEN, pack_driven(DrivenMoments(alpha, beta2, n, rho1, Y, rho2)))


def exact_reduced_moments(d: DensityState) -> MomentState:
    """Coherence-free projection of exact_moments."""
    return MomentState(Layout.REDUCED, driven_to_reduced(exact_moments(d).values))
