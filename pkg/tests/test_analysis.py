"""Spectra, linewidths, Dicke numbers, sweeps and the oracle suite."""

import dataclasses
import math

import numpy as np
import pytest

from zeeman_lasing.analysis.dicke import collective_numbers, dicke_numbers
from zeeman_lasing.analysis.emission import adaptive_emission_grid, default_filter, emission_spectrum, filter_scan
from zeeman_lasing.analysis.fwhm import detect_peaks, dominant_fwhm, fwhm, is_symmetric_pair, peak_separation
from zeeman_lasing.analysis.lasing import lasing_steady_state
from zeeman_lasing.analysis.linewidth import linewidth_implicit, linewidth_semianalytic, steady_inputs
from zeeman_lasing.analysis.sweep import SweepRow, SweepSettings, photon_number_ratio, pump_sweep
from zeeman_lasing.analysis.transmission import linear_transmission, transmission_spectrum
from zeeman_lasing.analysis.verify import (
    check_dicke_ground,
    check_dressed,
    check_driven_oracle,
    check_jump_bases,
    check_linewidth_forms,
    moment_errors,
    run_verification,
)
from zeeman_lasing.core.data import (
    DriveConfig,
    DriveShape,
    FilterParams,
    IntegrationConfig,
    Layout,
    MomentState,
    SpectrumKind,
    SpectrumResult,
)
from zeeman_lasing.core.errors import LayoutError, ParameterError, SolverError, SpectrumError
from zeeman_lasing.core.layout import ReducedMoments, ground_vacuum_driven, ground_vacuum_reduced, pack_reduced
from zeeman_lasing.core.units import ns_to_ms
from zeeman_lasing.exact import DensityState, exact_moments


def lorentzian(x, center=0.0, width=1.0, height=1.0):
    return height / (1.0 + (2.0 * (x - center) / width) ** 2)


def phase_across_peak(sr, center, level=0.8):
    """Phase relative to the peak value where the intensity first drops below level * height on each side."""
    k = int(np.argmin(np.abs(sr.offsets - center)))
    cut = level * sr.intensity[k]
    lo = k
    while lo > 0 and sr.intensity[lo] >= cut:
        lo -= 1
    hi = k
    while hi < sr.offsets.size - 1 and sr.intensity[hi] >= cut:
        hi += 1
    return sr.phase[lo] - sr.phase[k], sr.phase[hi] - sr.phase[k]


def reduced_state(p_bb, p_dd, p_gg, p_bd=0j, n=10.0) -> MomentState:
    p = np.array([[p_bb, p_bd], [np.conj(p_bd), p_dd]], dtype=complex)
    return MomentState(Layout.REDUCED, pack_reduced(ReducedMoments(n, np.zeros(2), p, p_gg, np.zeros((2, 2)))))


# =============================================================================
# FWHM and peaks
# =============================================================================


def test_dominant_fwhm_of_lorentzian():
    x = np.linspace(-10, 10, 2001)
    assert dominant_fwhm(x, lorentzian(x, width=1.0)) == pytest.approx(1.0, rel=1e-3)


def test_fwhm_needs_enough_points():
    x = np.linspace(-10, 10, 21)
    with pytest.raises(SpectrumError, match="finer"):
        dominant_fwhm(x, lorentzian(x, width=1.0))


def test_fwhm_needs_a_bounded_peak():
    x = np.linspace(-0.2, 0.2, 41)
    with pytest.raises(SpectrumError, match="not bounded"):
        dominant_fwhm(x, lorentzian(x, width=1.0))


def test_peaks_sorted_by_height():
    x = np.linspace(-10, 10, 2001)
    y = lorentzian(x, -3.0, 0.5, 1.0) + lorentzian(x, 3.0, 0.5, 0.8)
    peaks = detect_peaks(x, y)
    assert [round(f) for f, _ in peaks] == [-3, 3]
    assert is_symmetric_pair(peaks)
    assert peak_separation(peaks) == pytest.approx(6.0, abs=0.02)


def test_fwhm_modes():
    x = np.linspace(-10, 10, 2001)
    pair = SpectrumResult(SpectrumKind.EMISSION, x, lorentzian(x, -3.0, 0.5) + lorentzian(x, 3.0, 0.5))
    single = SpectrumResult(SpectrumKind.EMISSION, x, lorentzian(x, 1.0, 0.5))
    assert fwhm(pair, "auto") == pytest.approx(6.0, abs=0.02)
    assert fwhm(pair, "dominant") == pytest.approx(0.5, rel=1e-2)
    assert fwhm(single, "auto") == pytest.approx(0.5, rel=1e-2)
    with pytest.raises(SpectrumError):
        fwhm(single, "separation")
    with pytest.raises(ParameterError):
        fwhm(single, "widest")


# =============================================================================
# Transmission
# =============================================================================


def test_linear_transmission_of_empty_cavity(cavity_params):
    p = dataclasses.replace(cavity_params, g=0.0)
    x = np.linspace(-5 * p.kappa, 5 * p.kappa, 4001)
    t = linear_transmission(p, x)
    assert np.max(t) == pytest.approx(1.0, rel=1e-6)
    assert dominant_fwhm(x, t) == pytest.approx(p.kappa, rel=1e-3)


def test_linear_transmission_shows_vacuum_rabi_splitting(cavity_params):
    p = dataclasses.replace(cavity_params, delta_zeeman=0.0)
    split = math.sqrt(2 * p.n_atoms) * p.g
    x = np.linspace(-2 * split, 2 * split, 8001)
    peaks = detect_peaks(x, linear_transmission(p, x))
    top = sorted(f for f, _ in peaks[:2])
    assert top == pytest.approx([-split, split], rel=1e-2)


def test_transmission_needs_gaussian_pulse_and_output_mirror(cavity_params, cfg):
    constant = DriveConfig(amp0=1.0, shape=DriveShape.CONSTANT)
    with pytest.raises(ParameterError, match="gaussian"):
        transmission_spectrum(cavity_params, constant, cfg)
    pulse = DriveConfig(amp0=1.0, pulse_center=ns_to_ms(264.1), pulse_sigma=ns_to_ms(26.4))
    with pytest.raises(ParameterError, match="kappa2"):
        transmission_spectrum(dataclasses.replace(cavity_params, kappa2=0.0), pulse, cfg)


@pytest.mark.slow
def test_pulsed_transmission_of_empty_cavity(cavity_params, cfg):
    p = dataclasses.replace(cavity_params, g=0.0)
    pulse = DriveConfig(amp0=10.0, pulse_center=ns_to_ms(264.1), pulse_sigma=ns_to_ms(26.4))
    sr = transmission_spectrum(p, pulse, cfg)
    assert sr.kind == SpectrumKind.TRANSMISSION
    assert sr.peaks[0][0] == pytest.approx(0.0, abs=0.1 * p.kappa)
    assert sr.peaks[0][1] == pytest.approx(1.0, rel=2e-2)
    assert sr.fwhm == pytest.approx(p.kappa, rel=5e-2)
    near = np.abs(sr.offsets) < 3 * p.kappa
    assert np.allclose(sr.intensity[near], linear_transmission(p, sr.offsets[near]), rtol=1e-2, atol=1e-3)
    below, above = phase_across_peak(sr, sr.peaks[0][0])
    # Lorentzian at 0.8 of its height: the phase has turned by atan(1/2) either way
    assert below * above < 0
    assert abs(below) == pytest.approx(math.atan(0.5), abs=0.1)
    assert abs(above) == pytest.approx(math.atan(0.5), abs=0.1)


@pytest.mark.slow
def test_transmission_phase_turns_across_each_polariton(cavity_params, cfg):
    p = dataclasses.replace(cavity_params, delta_zeeman=0.0)
    pulse = DriveConfig(amp0=10.0, pulse_center=ns_to_ms(264.1), pulse_sigma=ns_to_ms(26.4))
    sr = transmission_spectrum(p, pulse, cfg)
    split = math.sqrt(2 * p.n_atoms) * p.g
    top = sorted(f for f, _ in sr.peaks[:2])
    assert top == pytest.approx([-split, split], rel=5e-2)
    for center in top:
        below, above = phase_across_peak(sr, center)
        assert below * above < 0


# =============================================================================
# Linewidth
# =============================================================================


def test_steady_inputs():
    s = steady_inputs(reduced_state(0.5, 0.1, 0.4, p_bd=0.01 - 0.02j))
    assert s.inversion == pytest.approx(0.1)
    assert s.im_coherence == pytest.approx(0.02)
    with pytest.raises(LayoutError):
        steady_inputs(MomentState(Layout.DRIVEN, ground_vacuum_driven()))


def test_linewidth_forms_agree(lasing_params):
    state = reduced_state(0.5, 0.2, 0.3, p_bd=0.02 + 0.05j)
    main = linewidth_semianalytic(lasing_params, state, "main")
    general = linewidth_semianalytic(lasing_params, state, "general")
    assert main.value == pytest.approx(general.value, rel=1e-12)
    assert main.width == abs(main.value)
    assert check_linewidth_forms(lasing_params, state)[0] <= 1e-10


def test_linewidth_without_inversion_is_half_kappa(lasing_params):
    state = reduced_state(0.3, 0.4, 0.3)
    est = linewidth_semianalytic(lasing_params, state)
    assert est.value == pytest.approx(0.5 * lasing_params.kappa)
    assert est.valid
    implicit = linewidth_implicit(lasing_params, state)
    assert implicit.value == pytest.approx(0.5 * lasing_params.kappa, rel=1e-10)
    assert implicit.converged


def test_linewidth_needs_balanced_pump(lasing_params):
    p = lasing_params.with_pump(2.0, 1.0)
    with pytest.raises(ParameterError, match="balanced"):
        linewidth_semianalytic(p, reduced_state(0.5, 0.2, 0.3))
    with pytest.raises(ParameterError):
        linewidth_semianalytic(lasing_params, reduced_state(0.5, 0.2, 0.3), form="other")


def test_implicit_close_to_semianalytic_when_narrow(two_atoms):
    # linewidth far below Lambda_+ + Gamma_+/2, so freezing it inside Z costs little
    p = dataclasses.replace(
        two_atoms, n_atoms=100, g=1.0, kappa1=0.5, kappa2=0.5, gamma_plus=1.0, gamma_minus=1.0,
        delta_zeeman=0.0, omega_a_offset=0.0,
    ).with_pump(50.0)
    state = reduced_state(0.5, 0.2, 0.45)
    semi = linewidth_semianalytic(p, state).value
    implicit = linewidth_implicit(p, state)
    assert 0 < semi < p.kappa
    assert implicit.value == pytest.approx(semi, rel=1e-2)
    assert implicit.bracket[0] <= implicit.value <= implicit.bracket[1]


# =============================================================================
# Dicke numbers
# =============================================================================


def test_dicke_all_ground(cavity_params):
    N = 250_000
    for state in (MomentState(Layout.REDUCED, ground_vacuum_reduced()), MomentState(Layout.DRIVEN, ground_vacuum_driven())):
        d = dicke_numbers(state, N, 1.0)
        assert d.J_B == pytest.approx(math.sqrt(N * (N + 2)) / 2, rel=1e-12)
        assert d.M_B == pytest.approx(-N / 2)
        assert d.J_D == pytest.approx(d.J_B)
        assert d.eta_over_gamma == 1.0
    assert check_dicke_ground(cavity_params)[0] <= 1e-12


def test_dicke_from_two_atom_states():
    g0, b0 = np.zeros(3), np.zeros(3)
    g0[0], b0[1] = 1.0, 1.0
    vac = np.array([1.0, 0.0])
    gb = np.kron(np.kron(g0, b0), vac)
    bg = np.kron(np.kron(b0, g0), vac)
    symmetric = exact_moments(DensityState.from_pure(2, 1, gb + bg))
    singlet = exact_moments(DensityState.from_pure(2, 1, gb - bg))
    assert dicke_numbers(symmetric, 2).J_B == pytest.approx(math.sqrt(2.0))
    assert dicke_numbers(singlet, 2).J_B == pytest.approx(0.0, abs=1e-7)
    assert dicke_numbers(singlet, 2).M_B == pytest.approx(0.0)


def test_dicke_rejects_inconsistent_pairs():
    with pytest.raises(SolverError):
        collective_numbers(10, 0.0, 1.0, exchange=-1.0, zz=0.0)
    with pytest.raises(LayoutError):
        dicke_numbers(MomentState(Layout.REDUCED_FILTER, np.zeros(21)), 10)


# =============================================================================
# Sweeps
# =============================================================================


def test_sweep_grid_validation(lasing_params):
    for grid in ([], [1.0, 1.0], [2.0, 1.0], [-1.0, 1.0]):
        with pytest.raises(ParameterError):
            pump_sweep(lasing_params, grid)
    no_decay = dataclasses.replace(lasing_params, gamma_plus=0.0, gamma_minus=0.0)
    with pytest.raises(ParameterError, match="gamma"):
        pump_sweep(no_decay, [1.0])


def test_sweep_row_columns():
    row = SweepRow(eta_over_gamma=1.0, eta=2.0)
    assert SweepRow.columns()[:2] == ["eta_over_gamma", "eta"]
    assert len(row.values()) == len(SweepRow.columns())
    assert math.isnan(row.n) and not row.converged


def test_photon_number_ratio():
    a = [SweepRow(1.0, 1.0, n=4.0), SweepRow(2.0, 2.0, n=9.0)]
    b = [SweepRow(1.0, 1.0, n=2.0), SweepRow(2.0, 2.0, n=0.0)]
    ratio = photon_number_ratio(a, b)
    assert ratio[0] == pytest.approx(2.0)
    assert np.isinf(ratio[1])
    with pytest.raises(ParameterError):
        photon_number_ratio(a, b[:1])


@pytest.mark.slow
def test_pump_sweep(lasing_params, cfg):
    rows = pump_sweep(lasing_params, [0.5, 5.0], cfg)
    assert [r.eta_over_gamma for r in rows] == [0.5, 5.0]
    assert all(r.converged for r in rows)
    assert rows[1].n > rows[0].n
    assert rows[1].eta == pytest.approx(5.0 * lasing_params.decay_plus)
    assert all(np.isfinite(r.J_B) and r.J_B >= 0 for r in rows)
    cold = pump_sweep(lasing_params, [0.5, 5.0], cfg, SweepSettings(warm_start=False, jobs=2))
    assert cold[1].n == pytest.approx(rows[1].n, rel=1e-6)


# =============================================================================
# Emission
# =============================================================================


def test_default_filter_follows_the_linewidth(lasing_params):
    state = reduced_state(0.5, 0.2, 0.3, p_bd=0.02 + 0.05j)
    est = linewidth_semianalytic(lasing_params, state)
    width = est.width if est.valid else None
    assert default_filter(lasing_params, state) == FilterParams.default_for(lasing_params, expected_width=width)
    unbalanced = dataclasses.replace(lasing_params, eta_minus=0.5 * lasing_params.eta_plus)
    assert default_filter(unbalanced, state) == FilterParams.default_for(unbalanced)


def test_emission_needs_pump(cavity_params):
    with pytest.raises(ParameterError, match="pump"):
        emission_spectrum(cavity_params, [0.0])
    with pytest.raises(ParameterError):
        adaptive_emission_grid(cavity_params.with_pump(1.0), span=0.0)


@pytest.mark.slow
def test_emission_spectrum(lasing_params, cfg):
    steady = lasing_steady_state(lasing_params, cfg).moment_state()
    span = 2.0 * lasing_params.kappa
    sr = emission_spectrum(lasing_params, np.linspace(-span, span, 81), steady=steady, jobs=2)
    assert sr.kind == SpectrumKind.EMISSION
    assert np.all(sr.intensity >= 0)
    assert sr.peaks
    assert emission_spectrum(lasing_params, sr.offsets, steady=steady, normalize=True).intensity.max() == pytest.approx(1.0)

    # weak filter coupling: the filter photon number scales with beta^2
    f = FilterParams.default_for(lasing_params)
    weak = dataclasses.replace(f, beta=f.beta / 2)
    top = [sr.peaks[0][0]]
    ratio = filter_scan(lasing_params, steady, top, f)[0] / filter_scan(lasing_params, steady, top, weak)[0]
    assert ratio == pytest.approx(4.0, rel=1e-3)


@pytest.mark.slow
def test_adaptive_grid_resolves_peak(lasing_params, cfg):
    span = 2.0 * lasing_params.kappa
    sr = adaptive_emission_grid(lasing_params, span=span, n_coarse=11, cfg=cfg, width_mode="dominant")
    assert sr.offsets.size > 11
    assert np.all(np.diff(sr.offsets) > 0)
    assert sr.fwhm is not None and 0 < sr.fwhm < span


# =============================================================================
# Oracle suite
# =============================================================================


def test_closed_form_checks(cavity_params):
    err, tol, _ = check_dressed(cavity_params, samples=50)
    assert err <= tol
    err, tol, _ = check_jump_bases(cavity_params)
    assert err <= tol


def test_moment_errors_use_an_absolute_floor():
    ex = np.array([1.0, -2.0, 0.0, 1e-12])
    mf = np.array([1.001, -2.0, 1e-12, 0.0])
    errs = moment_errors(mf, ex, floor=1e-9)
    assert errs == pytest.approx([1e-3, 0.0, 1e-3, 1e-3])


def test_driven_oracle_compares_every_moment_over_time(cavity_params, cfg):
    err, tol, detail = check_driven_oracle(cavity_params, 4, cfg)
    assert tol == 1e-3
    assert err <= tol
    assert detail.startswith("113 moments, 21 times")


@pytest.mark.slow
def test_run_verification(lasing_params):
    results = run_verification(lasing_params, IntegrationConfig(t_end=50.0), n_max=4, dressed_samples=20)
    names = [r.name for r in results]
    assert names[:4] == ["dressed shifts", "jump bases", "dicke all-ground", "linewidth forms"]
    assert len(results) == 7
    failed = [(r.name, r.error, r.tolerance, r.detail) for r in results if not r.passed]
    assert not failed
    assert all(r.seconds >= 0 for r in results)
