"""Shared fixtures: small ensembles that keep the integrations short."""

import pytest

from zeeman_lasing.core.data import IntegrationConfig, PhysicalParams
from zeeman_lasing.core.units import khz_to_angular, mhz_to_angular


@pytest.fixture
def cavity_params() -> PhysicalParams:
    """Resonant atoms and cavity, no pump."""
    gamma = khz_to_angular(7.5)
    return PhysicalParams(
        n_atoms=1000,
        g=khz_to_angular(7.5),
        kappa1=khz_to_angular(75.0),
        kappa2=khz_to_angular(75.0),
        gamma_plus=gamma,
        gamma_minus=gamma,
        delta_zeeman=mhz_to_angular(0.1),
    )


@pytest.fixture
def lasing_params(cavity_params) -> PhysicalParams:
    return cavity_params.with_pump(5.0 * cavity_params.decay_plus)


@pytest.fixture
def two_atoms() -> PhysicalParams:
    """Two atoms with a strong coupling so the exact oracle sees photons."""
    return PhysicalParams(
        n_atoms=2,
        g=2.0,
        kappa1=1.0,
        kappa2=1.0,
        gamma_plus=1.2,
        gamma_minus=0.8,
        eta_plus=0.6,
        eta_minus=0.4,
        delta_zeeman=1.5,
        omega_a_offset=0.3,
    )


@pytest.fixture
def cfg() -> IntegrationConfig:
    return IntegrationConfig(rtol=1e-9, atol=1e-12, t_end=50.0)
