"""
Third-order cumulant closure.

Every third-order moment in the equations is replaced by

    <XYZ> ~ <X><YZ> + <Y><XZ> + <Z><XY> - 2 <X><Y><Z>

The matrix helpers below apply this rule to all index combinations of one
moment form at once; in the coherence-free case (<a> = <b> = 0) they
collapse to products such as <a+a A> = <a+a><A>.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from ..core.data import Layout, MomentState
from ..core.errors import LayoutError
from ..core.layout import unpack_driven, unpack_filter, unpack_reduced


class MomentForm(Enum):
    """Third-order moment forms that appear in the equations of motion."""
    NUMBER_ATOM = "a+aA"
    PAIR_PHOTON_ATOM = "aaA"
    PHOTON_ATOM_ATOM = "aAA'"
    FILTER_PHOTON_ATOM = "b+aA"


def third_order(x, y, z, xy, xz, yz):
    """Scalar closure of <XYZ> from first and second moments."""
    return x * yz + y * xz + z * xy - 2.0 * x * y * z


def number_atom(n: float, alpha: complex, Y: np.ndarray, rho1: np.ndarray) -> np.ndarray:
    """<a+a A_st> for all s, t (indexed like rho1)."""
    return n * rho1 + np.conj(alpha) * Y + alpha * Y.conj().T - 2.0 * abs(alpha) ** 2 * rho1


def pair_photon_atom(alpha: complex, beta2: complex, Y: np.ndarray, rho1: np.ndarray) -> np.ndarray:
    """<a a A_st> for all s, t."""
    return 2.0 * alpha * Y + beta2 * rho1 - 2.0 * alpha ** 2 * rho1


def photon_atom_atom(alpha: complex, Y: np.ndarray, rho1: np.ndarray, rho2: np.ndarray) -> np.ndarray:
    """<a A_st A'_s't'> for all index pairs (indexed like rho2)."""
    return alpha * rho2 + np.kron(Y, rho1) + np.kron(rho1, Y) - 2.0 * alpha * np.kron(rho1, rho1)


def filter_photon_atom(x: complex, rho1: np.ndarray) -> np.ndarray:
    """<b+ a A_st> with <a> = <b> = 0."""
    return x * rho1


def close_third_order(form: MomentForm, state: MomentState) -> np.ndarray:
    """Closed value of every component of `form` for the given state.

    Driven states use the full rule; reduced states have <a> = 0 and give
    the collapsed products.
    """
    if state.layout == Layout.DRIVEN:
        m = unpack_driven(state.values)
        if form == MomentForm.NUMBER_ATOM:
            return number_atom(m.n, m.alpha, m.Y, m.rho1)
        if form == MomentForm.PAIR_PHOTON_ATOM:
            return pair_photon_atom(m.alpha, m.beta2, m.Y, m.rho1)
        if form == MomentForm.PHOTON_ATOM_ATOM:
            return photon_atom_atom(m.alpha, m.Y, m.rho1, m.rho2)
        raise LayoutError(f"{form.value} needs a filter block, driven states have none")

    rho1 = _reduced_rho1(state.values)
    if form == MomentForm.NUMBER_ATOM:
        return unpack_reduced(state.values).n * rho1
    if form == MomentForm.PAIR_PHOTON_ATOM:
        return np.zeros((3, 3), dtype=complex)
    if form == MomentForm.FILTER_PHOTON_ATOM:
        if state.layout != Layout.REDUCED_FILTER:
            raise LayoutError(f"{form.value} needs the {Layout.REDUCED_FILTER.value} layout")
        x = unpack_filter(state.values[-7:]).x
        return filter_photon_atom(x, rho1)
    raise LayoutError(f"{form.value} is not used by the coherence-free equations")


def _reduced_rho1(v: np.ndarray) -> np.ndarray:
    m = unpack_reduced(v)
    rho1 = np.zeros((3, 3), dtype=complex)
    rho1[0, 0] = m.p_gg
    # <A_rr'> = rho1[r', r]
    rho1[1:, 1:] = m.p.T
    return rho1
