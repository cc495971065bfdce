import numpy as np
import pytest

from app.core.exceptions import DomainError, InfiniteEnergyError
from app.models.cell_state import CellState
from app.models.energy_model import EnergyModel
from app.models.particle_state import ParticleState
from app.services.physics import (
    energy_density,
    energy_derivative,
    energy_second_derivative,
    interval_energy,
    pressure,
    total_energy_cells,
    total_energy_particles,
)


# ============================================================================
# Lei de energia
# ============================================================================

def test_default_kappa_is_theta_squared_over_gamma():
    model = EnergyModel.polytropic(5.0 / 3.0)

    assert model.theta == pytest.approx(1.0 / 3.0)
    assert model.kappa == pytest.approx(1.0 / 15.0)


def test_polytropic_requires_gamma_above_one():
    with pytest.raises(ValueError):
        EnergyModel.polytropic(1.0)


def test_isothermal_rejects_gamma():
    with pytest.raises(ValueError):
        EnergyModel(kind="Isothermal", gamma=2.0)


@pytest.mark.parametrize("model", [EnergyModel.polytropic(5.0 / 3.0, 1.0), EnergyModel.polytropic(3.0), EnergyModel.isothermal()])
def test_pressure_identity(model):
    """P = U'(rho) rho - U(rho)."""
    rho = np.array([0.1, 0.5, 1.0, 2.5])

    expected = energy_derivative(model, rho) * rho - energy_density(model, rho)

    np.testing.assert_allclose(pressure(model, rho), expected, rtol=1e-13)


def test_isothermal_energy_vanishes_at_zero_density(isothermal):
    assert energy_density(isothermal, 0.0) == 0.0
    assert energy_density(isothermal, 1.0) == 0.0


def test_scalar_input_returns_float(polytropic):
    assert isinstance(energy_density(polytropic, 0.5), float)


def test_negative_density_is_domain_error(polytropic):
    with pytest.raises(DomainError):
        energy_density(polytropic, -0.1)
    with pytest.raises(DomainError):
        pressure(polytropic, np.array([0.2, np.nan]))


def test_isothermal_derivative_needs_positive_density(isothermal):
    with pytest.raises(DomainError):
        energy_derivative(isothermal, 0.0)
    with pytest.raises(DomainError):
        energy_second_derivative(isothermal, 0.0)


# ============================================================================
# Energia por intervalo
# ============================================================================

@pytest.mark.parametrize("model", [EnergyModel.polytropic(5.0 / 3.0), EnergyModel.polytropic(5.0), EnergyModel.isothermal()])
def test_interval_energy_derivatives_match_finite_differences(model):
    masses = np.array([0.2, 0.3, 0.5])
    gaps = np.array([0.4, 1.1, 0.7])
    h = 1e-6

    value, first, second = interval_energy(model, masses, gaps)
    up, up_first, _ = interval_energy(model, masses, gaps + h)
    down, down_first, _ = interval_energy(model, masses, gaps - h)

    np.testing.assert_allclose(first, (up - down) / (2 * h), rtol=1e-6)
    np.testing.assert_allclose(second, (up_first - down_first) / (2 * h), rtol=1e-6)


def test_interval_energy_first_derivative_is_minus_pressure(polytropic):
    _, first, _ = interval_energy(polytropic, np.array([0.5]), np.array([0.25]))

    assert first[0] == pytest.approx(-pressure(polytropic, 2.0))


def test_degenerate_interval_is_infinite_energy(polytropic):
    with pytest.raises(InfiniteEnergyError):
        interval_energy(polytropic, np.array([0.5, 0.5]), np.array([0.3, 0.0]))


# ============================================================================
# Energias totais
# ============================================================================

def test_particle_energy():
    state = ParticleState(np.array([0.0, 1.0]), np.array([1.0, -1.0]), 0.5)
    model = EnergyModel.isothermal()

    energy = total_energy_particles(state, model)

    # cinética: 1/2 * 0.5 * 2; interna: rho log rho * g com rho = 0.5
    assert energy.kinetic == pytest.approx(0.5)
    assert energy.internal == pytest.approx(0.5 * np.log(0.5))
    assert energy.total == pytest.approx(energy.kinetic + energy.internal)


def test_cell_kinetic_energy_of_linear_velocity(pressureless):
    """u(x) = x em [0, 1] com rho = 1: int u^2 / 2 = 1/6."""
    state = CellState(np.linspace(0.0, 1.0, 6), np.full(5, 0.2), np.linspace(0.0, 1.0, 6))

    energy = total_energy_cells(state, pressureless)

    assert energy.kinetic == pytest.approx(1.0 / 6.0, rel=1e-13)
    assert energy.internal == 0.0
