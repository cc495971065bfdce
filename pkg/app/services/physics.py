"""Leis de energia interna, pressão e energias totais discretas."""

from typing import NamedTuple

import numpy as np
from scipy.special import xlogy

from app.core.exceptions import DomainError, InfiniteEnergyError
from app.enums.energy_kind import EnergyKind
from app.models.cell_state import CellState
from app.models.energy_model import EnergyModel
from app.models.particle_state import ParticleState


class EnergyBreakdown(NamedTuple):
    kinetic: float
    internal: float
    total: float


def _density(rho, allow_zero: bool = True) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if np.any(np.isnan(rho)) or np.any(rho < 0):
        raise DomainError("densidade negativa ou NaN")
    if not allow_zero and np.any(rho == 0):
        raise DomainError("densidade deve ser positiva")
    return rho


def _scalar_or_array(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def energy_density(model: EnergyModel, rho):
    """U(rho); no modelo isotérmico U(0) = 0 por continuidade."""
    rho = _density(rho)
    if model.kind == EnergyKind.Polytropic:
        values = model.kappa * rho**model.gamma / (model.gamma - 1)
    elif model.kind == EnergyKind.Isothermal:
        values = xlogy(rho, rho)
    else:
        values = np.zeros_like(rho)
    return _scalar_or_array(values)


def energy_derivative(model: EnergyModel, rho):
    """U'(rho). O modelo isotérmico exige rho > 0."""
    if model.kind == EnergyKind.Polytropic:
        rho = _density(rho)
        values = model.kappa * model.gamma / (model.gamma - 1) * rho ** (model.gamma - 1)
    elif model.kind == EnergyKind.Isothermal:
        values = np.log(_density(rho, allow_zero=False)) + 1.0
    else:
        values = np.zeros_like(_density(rho))
    return _scalar_or_array(values)


def energy_second_derivative(model: EnergyModel, rho):
    if model.kind == EnergyKind.Polytropic:
        rho = _density(rho)
        values = model.kappa * model.gamma * rho ** (model.gamma - 2)
    elif model.kind == EnergyKind.Isothermal:
        values = 1.0 / _density(rho, allow_zero=False)
    else:
        values = np.zeros_like(_density(rho))
    return _scalar_or_array(values)


def pressure(model: EnergyModel, rho):
    """P(rho) = U'(rho) rho - U(rho)."""
    rho = _density(rho)
    if model.kind == EnergyKind.Polytropic:
        values = model.kappa * rho**model.gamma
    elif model.kind == EnergyKind.Isothermal:
        values = rho.copy()
    else:
        values = np.zeros_like(rho)
    return _scalar_or_array(values)


def interval_energy(model: EnergyModel, masses: np.ndarray, gaps: np.ndarray):
    """Energia e(g) = U(m/g) g de cada intervalo e suas derivadas em g.

    e'(g) = -P(rho) e e''(g) = U''(rho) rho^2 / g, com rho = m/g.
    """
    gaps = np.asarray(gaps, dtype=float)
    if np.any(gaps <= 0):
        raise InfiniteEnergyError("intervalo degenerado: posições devem ser estritamente crescentes")

    rho = np.asarray(masses, dtype=float) / gaps
    value = np.asarray(energy_density(model, rho)) * gaps
    first = -np.asarray(pressure(model, rho))

    if model.kind == EnergyKind.Polytropic:
        second = model.kappa * model.gamma * rho**model.gamma / gaps
    elif model.kind == EnergyKind.Isothermal:
        second = rho / gaps
    else:
        second = np.zeros_like(gaps)
    return value, first, second


def internal_energy(model: EnergyModel, masses: np.ndarray, gaps: np.ndarray) -> float:
    value, _, _ = interval_energy(model, masses, gaps)
    return float(np.sum(value))


def total_energy_particles(state: ParticleState, model: EnergyModel) -> EnergyBreakdown:
    m = state.particle_mass
    kinetic = float(0.5 * m * np.sum(state.velocities**2))
    internal = internal_energy(model, np.full(state.n - 1, m), state.gaps)
    return EnergyBreakdown(kinetic, internal, kinetic + internal)


def total_energy_cells(state: CellState, model: EnergyModel) -> EnergyBreakdown:
    """Cinética exata de u linear com rho constante por célula:
    sum_i (m_i / 6)(u_{i-1}^2 + u_{i-1} u_i + u_i^2).
    """
    left, right = state.velocities[:-1], state.velocities[1:]
    kinetic = float(np.sum(state.masses / 6.0 * (left**2 + left * right + right**2)))
    internal = internal_energy(model, state.masses, state.widths)
    return EnergyBreakdown(kinetic, internal, kinetic + internal)


def total_energy(state: ParticleState | CellState, model: EnergyModel) -> EnergyBreakdown:
    if isinstance(state, ParticleState):
        return total_energy_particles(state, model)
    return total_energy_cells(state, model)
