"""Moment layouts, closure rules and the mean-field equations."""

import dataclasses

import numpy as np
import pytest

from zeeman_lasing.core.data import DRIVEN_SIZE, DriveConfig, DriveShape, FilterParams, Layout, MomentState
from zeeman_lasing.core.errors import ConvergenceError, LayoutError
from zeeman_lasing.core.layout import (
    B,
    D,
    G,
    DrivenMoments,
    ReducedMoments,
    driven_names,
    driven_to_reduced,
    ground_vacuum_driven,
    ground_vacuum_reduced,
    pack_driven,
    pack_reduced,
    reduced_names,
    reduced_population_row,
    reduced_to_driven,
    unpack_driven,
    unpack_reduced,
)
from zeeman_lasing.cumulant.closure import MomentForm, close_third_order, third_order
from zeeman_lasing.cumulant.driven import DrivenEquations, driven_rhs
from zeeman_lasing.cumulant.filter import CascadedEquations, FilterSystem, filter_photon_number
from zeeman_lasing.cumulant.reduced import ReducedEquations, undriven_rhs


def random_hermitian(rng, dim, scale=0.1):
    m = scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return 0.5 * (m + m.conj().T)


def random_driven(rng) -> DrivenMoments:
    rho1 = random_hermitian(rng, 3)
    rho1[G, G] += 0.7
    Y = 0.05 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    rho2 = np.kron(rho1, rho1) + random_hermitian(rng, 9, 0.01)
    return DrivenMoments(0.1 + 0.2j, 0.01 - 0.02j, 0.3, rho1, Y, rho2)


def random_reduced(rng) -> np.ndarray:
    p = random_hermitian(rng, 2)
    p[0, 0] += 0.2
    p[1, 1] += 0.1
    c = random_hermitian(rng, 2, 0.01)
    y = 0.05 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    return pack_reduced(ReducedMoments(2.5, y, p, 0.7, c))


# =============================================================================
# Layouts
# =============================================================================


def test_driven_layout_round_trip():
    m = random_driven(np.random.default_rng(0))
    v = pack_driven(m)
    assert v.shape == (DRIVEN_SIZE,)
    back = unpack_driven(v)
    assert back.alpha == pytest.approx(m.alpha)
    assert np.allclose(back.rho1, m.rho1)
    assert np.allclose(back.Y, m.Y)
    assert np.allclose(back.rho2, m.rho2)
    assert len(driven_names()) == DRIVEN_SIZE


def test_reduced_embedding_is_inverted_by_projection():
    v = random_reduced(np.random.default_rng(1))
    assert np.allclose(driven_to_reduced(reduced_to_driven(v)), v)
    assert len(reduced_names()) == v.size


def test_embedded_state_has_no_coherences():
    m = unpack_driven(reduced_to_driven(random_reduced(np.random.default_rng(2))))
    assert m.alpha == 0 and m.beta2 == 0
    assert m.rho1[G, B] == 0 and m.rho1[D, G] == 0
    assert m.Y[B, G] == 0


def test_wrong_length_is_rejected():
    with pytest.raises(LayoutError):
        unpack_driven(np.zeros(DRIVEN_SIZE - 1))
    with pytest.raises(LayoutError):
        unpack_reduced(np.zeros(10))


# =============================================================================
# Closure
# =============================================================================


def test_third_order_reproduces_uncorrelated_product():
    x, y, z = 0.3, -1.2, 2.0
    assert third_order(x, y, z, x * y, x * z, y * z) == pytest.approx(x * y * z)


def test_closure_of_reduced_state():
    v = random_reduced(np.random.default_rng(4))
    s = MomentState(Layout.REDUCED, v)
    number = close_third_order(MomentForm.NUMBER_ATOM, s)
    m = unpack_reduced(v)
    assert number[G, G] == pytest.approx(m.n * m.p_gg)
    assert np.all(close_third_order(MomentForm.PAIR_PHOTON_ATOM, s) == 0)
    with pytest.raises(LayoutError):
        close_third_order(MomentForm.FILTER_PHOTON_ATOM, s)


# =============================================================================
# Equations of motion
# =============================================================================


def test_ground_vacuum_is_stationary_without_pump_or_drive(cavity_params):
    reduced = undriven_rhs(cavity_params, MomentState(Layout.REDUCED, ground_vacuum_reduced()))
    driven = driven_rhs(cavity_params, 0.0, MomentState(Layout.DRIVEN, ground_vacuum_driven()))
    assert np.allclose(reduced.values, 0.0)
    assert np.allclose(driven.values, 0.0)


def test_pump_excites_ground_state(lasing_params):
    d = unpack_reduced(undriven_rhs(lasing_params, MomentState(Layout.REDUCED, ground_vacuum_reduced())).values)
    assert d.p_gg == pytest.approx(-2 * lasing_params.pump_plus)
    assert d.p[0, 0].real == pytest.approx(lasing_params.pump_plus)


def test_reduced_equations_conserve_population(two_atoms):
    rng = np.random.default_rng(5)
    eq = ReducedEquations(two_atoms)
    for _ in range(5):
        assert reduced_population_row() @ eq(0.0, random_reduced(rng)) == pytest.approx(0.0, abs=1e-12)
    assert eq.evaluations == 5


def test_driven_equations_preserve_traces(two_atoms):
    p = dataclasses.replace(two_atoms, drive=DriveConfig(amp0=0.7, shape=DriveShape.CONSTANT))
    d = unpack_driven(DrivenEquations(p)(0.0, pack_driven(random_driven(np.random.default_rng(6)))))
    assert np.trace(d.rho1) == pytest.approx(0.0, abs=1e-12)
    assert np.trace(d.rho2) == pytest.approx(0.0, abs=1e-12)


def test_driven_and_reduced_agree_without_coherences(two_atoms):
    v = random_reduced(np.random.default_rng(7))
    reduced = unpack_reduced(ReducedEquations(two_atoms)(0.0, v))
    driven = unpack_reduced(driven_to_reduced(DrivenEquations(two_atoms)(0.0, reduced_to_driven(v))))
    assert driven.n == pytest.approx(reduced.n)
    assert driven.p_gg == pytest.approx(reduced.p_gg)
    assert np.allclose(np.diag(driven.p), np.diag(reduced.p))


def test_drive_enters_field_equation(cavity_params):
    drive = DriveConfig(amp0=2.0, shape=DriveShape.CONSTANT)
    p = dataclasses.replace(cavity_params, drive=drive)
    eq = DrivenEquations(p)
    d = unpack_driven(eq(0.0, ground_vacuum_driven()))
    assert eq.drive(0.0) == pytest.approx(np.sqrt(p.kappa1) * 2.0)
    assert d.alpha == pytest.approx(-1j * eq.drive(0.0))


# =============================================================================
# Filter cavity
# =============================================================================


def test_filter_needs_a_steady_main_state(lasing_params):
    f = FilterParams.default_for(lasing_params)
    with pytest.raises(ConvergenceError):
        FilterSystem(lasing_params, f, MomentState(Layout.REDUCED, ground_vacuum_reduced()))


def test_filter_sees_nothing_from_an_empty_cavity(cavity_params):
    f = FilterParams.default_for(cavity_params)
    vacuum = MomentState(Layout.REDUCED, ground_vacuum_reduced())
    assert filter_photon_number(cavity_params, f, vacuum) == pytest.approx(0.0, abs=1e-30)


def test_filter_system_is_linear(two_atoms):
    v = random_reduced(np.random.default_rng(8))
    f = FilterParams(omega_f_offset=0.2, beta=1e-3, chi=1e-2)
    system = FilterSystem(two_atoms, f, MomentState(Layout.REDUCED, v), check=False)
    z = np.random.default_rng(9).normal(size=7)
    assert np.allclose(system(0.0, z), system.matrix @ z + system.offset)
    assert np.allclose(system(0.0, system.steady_state()), 0.0, atol=1e-12)


def test_cascaded_equations_split(two_atoms):
    f = FilterParams(omega_f_offset=0.0, beta=1e-3, chi=1e-2)
    eq = CascadedEquations(two_atoms, f)
    v = random_reduced(np.random.default_rng(10))
    y = np.concatenate([v, np.zeros(7)])
    out = eq(0.0, y)
    assert np.allclose(out[:14], ReducedEquations(two_atoms)(0.0, v))
    with pytest.raises(LayoutError):
        eq(0.0, v)
