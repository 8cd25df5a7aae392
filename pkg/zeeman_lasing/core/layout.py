"""
Packing of moment states into flat real vectors.

Atomic levels are indexed g=0, B=1, D=2. Single-atom moments form the
reduced density matrix rho1[t, s] = <A_st>, atom-photon moments
Y[t, s] = <a A_st>, and pair moments the two-atom reduced density matrix
rho2[(t, t'), (s, s')] = <A_st A'_s't'> with compound index 3*t + t'.
Hermitian matrices store the real diagonal followed by real and imaginary
parts of the strict upper triangle, so conjugate pairs are stored once.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .data import DRIVEN_SIZE, FILTER_SIZE, REDUCED_SIZE, Layout
from .errors import LayoutError

LEVELS = ("g", "B", "D")
G, B, D = 0, 1, 2
EXCITED = (B, D)


# =============================================================================
# HERMITIAN BLOCKS
# =============================================================================


def pack_hermitian(m: np.ndarray) -> np.ndarray:
    dim = m.shape[0]
    iu = np.triu_indices(dim, 1)
    upper = m[iu]
    return np.concatenate([np.real(np.diag(m)), upper.real, upper.imag])


def unpack_hermitian(v: np.ndarray, dim: int) -> np.ndarray:
    iu = np.triu_indices(dim, 1)
    k = len(iu[0])
    m = np.zeros((dim, dim), dtype=complex)
    m[np.diag_indices(dim)] = v[:dim]
    m[iu] = v[dim:dim + k] + 1j * v[dim + k:dim + 2 * k]
    m[(iu[1], iu[0])] = np.conj(m[iu])
    return m


# =============================================================================
# DRIVEN LAYOUT
# =============================================================================


class DrivenMoments(NamedTuple):
    alpha: complex
    beta2: complex
    n: float
    rho1: np.ndarray
    Y: np.ndarray
    rho2: np.ndarray


def _check(v: np.ndarray, size: int, name: str) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (size,):
        raise LayoutError(f"{name} vector needs {size} values, got shape {v.shape}")
    return v


def pack_driven(m: DrivenMoments) -> np.ndarray:
    Y = np.asarray(m.Y, dtype=complex).ravel()
    return np.concatenate([
        [np.real(m.alpha), np.imag(m.alpha), np.real(m.beta2), np.imag(m.beta2), np.real(m.n)],
        pack_hermitian(np.asarray(m.rho1)),
        Y.real,
        Y.imag,
        pack_hermitian(np.asarray(m.rho2)),
    ])


def unpack_driven(v: np.ndarray) -> DrivenMoments:
    v = _check(v, DRIVEN_SIZE, "driven102")
    rho1 = unpack_hermitian(v[5:14], 3)
    Y = (v[14:23] + 1j * v[23:32]).reshape(3, 3)
    rho2 = unpack_hermitian(v[32:], 9)
    return DrivenMoments(complex(v[0], v[1]), complex(v[2], v[3]), float(v[4]), rho1, Y, rho2)


def ground_vacuum_driven() -> np.ndarray:
    rho1 = np.zeros((3, 3), dtype=complex)
    rho1[G, G] = 1.0
    return pack_driven(DrivenMoments(0j, 0j, 0.0, rho1, np.zeros((3, 3)), np.kron(rho1, rho1)))


def driven_names() -> list[str]:
    names = ["alpha_re", "alpha_im", "aa_re", "aa_im", "n"]
    names += _hermitian_names("A", 3, LEVELS)
    pairs = [f"{t}{s}" for t in LEVELS for s in LEVELS]
    names += [f"aA[{p}]_re" for p in pairs] + [f"aA[{p}]_im" for p in pairs]
    names += _hermitian_names("AA", 9, [t + u for t in LEVELS for u in LEVELS])
    return names


def _hermitian_names(prefix: str, dim: int, labels) -> list[str]:
    iu = np.triu_indices(dim, 1)
    names = [f"{prefix}[{labels[i]},{labels[i]}]" for i in range(dim)]
    names += [f"{prefix}[{labels[i]},{labels[j]}]_re" for i, j in zip(*iu)]
    names += [f"{prefix}[{labels[i]},{labels[j]}]_im" for i, j in zip(*iu)]
    return names


# =============================================================================
# REDUCED (COHERENCE-FREE) LAYOUT
# =============================================================================


class ReducedMoments(NamedTuple):
    """Coherence-free moments. Index 0 is B, 1 is D in every 2-vector/2x2 block.

    y[r] = <a A_rg>, p[r, r'] = <A_rr'>, c[r, r'] = <A_gr A'_r'g>.
    """
    n: float
    y: np.ndarray
    p: np.ndarray
    p_gg: float
    c: np.ndarray


def pack_reduced(m: ReducedMoments) -> np.ndarray:
    y, p, c = np.asarray(m.y), np.asarray(m.p), np.asarray(m.c)
    return np.array([
        np.real(m.n),
        y[0].real, y[0].imag, y[1].real, y[1].imag,
        p[0, 0].real, p[1, 1].real, p[0, 1].real, p[0, 1].imag,
        np.real(m.p_gg),
        c[0, 0].real, c[1, 1].real, c[0, 1].real, c[0, 1].imag,
    ])


def unpack_reduced(v: np.ndarray) -> ReducedMoments:
    v = np.asarray(v)
    if v.shape[0] not in (REDUCED_SIZE, REDUCED_SIZE + FILTER_SIZE):
        raise LayoutError(f"reduced16 vector needs {REDUCED_SIZE} values, got shape {v.shape}")
    y = np.array([v[1] + 1j * v[2], v[3] + 1j * v[4]])
    p_bd = v[7] + 1j * v[8]
    p = np.array([[v[5], p_bd], [np.conj(p_bd), v[6]]], dtype=complex)
    c_bd = v[12] + 1j * v[13]
    c = np.array([[v[10], c_bd], [np.conj(c_bd), v[11]]], dtype=complex)
    return ReducedMoments(float(v[0]), y, p, float(v[9]), c)


def ground_vacuum_reduced() -> np.ndarray:
    v = np.zeros(REDUCED_SIZE)
    v[9] = 1.0
    return v


def reduced_names() -> list[str]:
    return [
        "n",
        "aA[Bg]_re", "aA[Bg]_im", "aA[Dg]_re", "aA[Dg]_im",
        "A[BB]", "A[DD]", "A[BD]_re", "A[BD]_im",
        "A[gg]",
        "AA[gB,Bg]", "AA[gD,Dg]", "AA[gB,Dg]_re", "AA[gB,Dg]_im",
    ]


def reduced_population_row() -> np.ndarray:
    """Row vector selecting <A_gg> + <A_BB> + <A_DD> in the reduced layout."""
    row = np.zeros(REDUCED_SIZE)
    row[[5, 6, 9]] = 1.0
    return row


# =============================================================================
# FILTER BLOCK
# =============================================================================


class FilterMoments(NamedTuple):
    """n_b = <b+b>, x = <b+a>, u[r] = <b+ A_gr> (r = B, D)."""
    n_b: float
    x: complex
    u: np.ndarray


def pack_filter(m: FilterMoments) -> np.ndarray:
    u = np.asarray(m.u)
    return np.array([np.real(m.n_b), np.real(m.x), np.imag(m.x), u[0].real, u[0].imag, u[1].real, u[1].imag])


def unpack_filter(v: np.ndarray) -> FilterMoments:
    v = _check(v, FILTER_SIZE, "filter")
    return FilterMoments(float(v[0]), complex(v[1], v[2]), np.array([v[3] + 1j * v[4], v[5] + 1j * v[6]]))


def filter_names() -> list[str]:
    return ["bb", "ba_re", "ba_im", "bA[gB]_re", "bA[gB]_im", "bA[gD]_re", "bA[gD]_im"]


# =============================================================================
# LAYOUT CONVERSIONS
# =============================================================================


def reduced_to_driven(v: np.ndarray) -> np.ndarray:
    """Embed a coherence-free state in the driven layout.

    Pair populations are filled with the factorized product rho1 (x) rho1.
    """
    m = unpack_reduced(v)
    rho1 = np.zeros((3, 3), dtype=complex)
    rho1[G, G] = m.p_gg
    Y = np.zeros((3, 3), dtype=complex)
    for i, r in enumerate(EXCITED):
        Y[G, r] = m.y[i]
        for j, rp in enumerate(EXCITED):
            # <A_rr'> = rho1[r', r]
            rho1[rp, r] = m.p[i, j]
    rho2 = np.kron(rho1, rho1)
    for i, r in enumerate(EXCITED):
        for j, rp in enumerate(EXCITED):
            rho2[3 * r + G, 3 * G + rp] = m.c[i, j]
            rho2[3 * G + r, 3 * rp + G] = m.c[i, j]
    return pack_driven(DrivenMoments(0j, 0j, m.n, rho1, Y, rho2))


def driven_to_reduced(v: np.ndarray) -> np.ndarray:
    """Project a driven-layout vector (state or derivative) onto the reduced layout.

    Linear in v, so it maps derivatives as well as states. Pair
    coherences are averaged over the two atom orderings.
    """
    m = unpack_driven(v)
    y = np.array([m.Y[G, r] for r in EXCITED])
    p = np.array([[m.rho1[rp, r] for rp in EXCITED] for r in EXCITED])
    c = np.array([
        [0.5 * (m.rho2[3 * r + G, 3 * G + rp] + m.rho2[3 * G + r, 3 * rp + G]) for rp in EXCITED]
        for r in EXCITED
    ])
    c = 0.5 * (c + c.conj().T)
    p = 0.5 * (p + p.conj().T)
    return pack_reduced(ReducedMoments(m.n, y, p, float(m.rho1[G, G].real), c))


def layout_names(layout: Layout) -> list[str]:
    if layout == Layout.DRIVEN:
        return driven_names()
    if layout == Layout.REDUCED:
        return reduced_names()
    return reduced_names() + filter_names()
