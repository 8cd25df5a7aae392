"""
Atom-light dressed states of the single-excitation block Hamiltonian.

Each photon-number block couples |D>|n>, |B>|n> and |G>|n+1>:

    H(n) = [[w_ac,   Delta/2, 0  ],
            [Delta/2, w_ac,   g_n],
            [0,       g_n,    0  ]]

with w_ac = omega_a - omega_c, g_n = sqrt(n+1) sqrt(2N) g, and the constant
(n+1) omega_c dropped.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..core.data import Branch, DressedLevel, PhysicalParams
from ..core.errors import ParameterError

logger = logging.getLogger(__name__)

BRANCHES = (Branch.PLUS, Branch.ZERO, Branch.MINUS)

# Relative root separation below which the cubic branch is treated as degenerate
DEGENERACY_TOL = 1e-9


def block_coupling(p: PhysicalParams, n: int) -> float:
    return math.sqrt(n + 1) * math.sqrt(2.0 * p.n_atoms) * p.g


def hamiltonian_block(p: PhysicalParams, n: int) -> np.ndarray:
    """The 3x3 block in basis (|n>|D>, |n>|B>, |n+1>|G>)."""
    if n < 0:
        raise ParameterError(f"photon number must be >= 0, got {n}")
    w = p.atom_cavity_detuning
    d = 0.5 * p.delta_zeeman
    gn = block_coupling(p, n)
    return np.array([
        [w, d, 0.0],
        [d, w, gn],
        [0.0, gn, 0.0],
    ])


def cubic_shifts(w: float, d: float, gn: float) -> np.ndarray:
    """Real roots of 4 d^3 - 8 w d^2 - 4 [g_n^2 + (Delta/2)^2 - w^2] d + 4 g_n^2 w, descending.

    Trigonometric solution of the depressed cubic; all three roots are real
    because the block is Hermitian.
    """
    # monic: x^3 + a x^2 + b x + c
    a = -2.0 * w
    b = w * w - gn * gn - d * d
    c = gn * gn * w
    shift = -a / 3.0
    pp = b - a * a / 3.0
    qq = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    if pp >= 0.0:
        # triple root (pp is never positive for a Hermitian block)
        roots = np.full(3, shift + np.cbrt(-qq))
    else:
        r = 2.0 * math.sqrt(-pp / 3.0)
        arg = 3.0 * qq / (pp * r)
        phi = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        roots = shift + r * np.cos(phi - 2.0 * math.pi * np.arange(3) / 3.0)

    scale = max(abs(w), abs(d), abs(gn), 1e-300)
    for _ in range(2):
        f = ((roots + a) * roots + b) * roots + c
        df = (3.0 * roots + 2.0 * a) * roots + b
        ok = np.abs(df) > 1e-6 * scale * scale
        roots = np.where(ok, roots - f / np.where(ok, df, 1.0), roots)

    residual = np.max(np.abs(4.0 * (((roots + a) * roots + b) * roots + c)))
    if residual > 1e-9 * 4.0 * scale ** 3:
        logger.warning("dressed cubic residual %.3e exceeds tolerance (scale %.3e)", residual, scale)
    return np.sort(roots)[::-1]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Normalize and make the largest component real positive."""
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def _resonant_levels(d: float, gn: float) -> tuple[np.ndarray, list[np.ndarray]]:
    omega = math.sqrt(gn * gn + d * d)
    if omega == 0.0:
        # bare states: plus -> B, zero -> D, minus -> G
        vecs = [np.array([0, 1, 0], complex), np.array([1, 0, 0], complex), np.array([0, 0, 1], complex)]
        return np.zeros(3), vecs
    plus = np.array([d, omega, gn], dtype=complex)
    zero = np.array([gn, 0.0, -d], dtype=complex)
    minus = np.array([d, -omega, gn], dtype=complex)
    return np.array([omega, 0.0, -omega]), [_fix_phase(v) for v in (plus, zero, minus)]


def dressed_levels(p: PhysicalParams, n: int) -> list[DressedLevel]:
    """The three dressed states of block n, ordered plus, zero, minus."""
    h = hamiltonian_block(p, n)
    w, d, gn = h[0, 0], h[0, 1], h[1, 2]

    if w == 0.0:
        shifts, vecs = _resonant_levels(d, gn)
    else:
        shifts = cubic_shifts(w, d, gn)
        scale = max(abs(w), abs(d), abs(gn))
        gaps = np.abs(np.diff(shifts))
        if np.any(gaps < DEGENERACY_TOL * scale):
            logger.warning(
                "degenerate dressed shifts at n=%d (w_ac=%.3e, Delta/2=%.3e, g_n=%.3e); "
                "using numerical eigenvectors", n, w, d, gn,
            )
            evals, evecs = np.linalg.eigh(h)
            order = np.argsort(evals)[::-1]
            shifts = evals[order]
            vecs = [_fix_phase(evecs[:, k].astype(complex)) for k in order]
        else:
            vecs = [_cubic_vector(h, w, d, gn, s, scale) for s in shifts]

    return [
        DressedLevel(branch=br, n_photons=n, shift=float(s), amp_D=v[0], amp_B=v[1], amp_G=v[2])
        for br, s, v in zip(BRANCHES, shifts, vecs)
    ]


def _cubic_vector(h: np.ndarray, w: float, d: float, gn: float, s: float, scale: float) -> np.ndarray:
    """Eigenvector (2(g_n^2 + w s - s^2), -s Delta, -g_n Delta) on (D, B, G)."""
    delta = 2.0 * d
    v = np.array([2.0 * (gn * gn + w * s - s * s), -s * delta, -gn * delta], dtype=complex)
    if np.linalg.norm(v) < 1e-8 * scale * scale:
        # Delta = 0: the closed form vanishes on the bright pair, use the null vector
        _, _, vh = np.linalg.svd(h - s * np.eye(3))
        v = vh[-1].conj().astype(complex)
    return _fix_phase(v)


def eigen_shifts(p: PhysicalParams, n: int) -> np.ndarray:
    """Numerical eigenvalues of the block, descending (reference for the closed forms)."""
    return np.sort(np.linalg.eigvalsh(hamiltonian_block(p, n)))[::-1]
