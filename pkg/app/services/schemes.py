"""Passos de tempo variacionais.

Cada passo monta um objetivo convexo, minimiza com `optimizer.minimize` e
aplica a atualização de velocidade do esquema. Os esquemas de partículas
(VPS1, PM1) trabalham com ParticleState; os de células (VPS1a, VPS2, PM2,
DIRK2) com CellState e, quando são de dois níveis, com Bdf2History.
"""

import logging
from dataclasses import replace
from typing import Sequence

import numpy as np

from app.dtos.reportDtos import MinimizeStats
from app.dtos.schemeDtos import SchemeConfig
from app.enums.scheme_kind import SchemeKind
from app.models.cell_state import Bdf2History, CellState
from app.models.energy_model import EnergyModel
from app.models.particle_state import ParticleState
from app.services.optimizer import minimize, spread_initial_guess
from app.services.physics import interval_energy
from app.services.transport1d import mass_matrix, sort_with_permutation, transport_project
from app.utils.tridiagonal import SymTridiagonal

logger = logging.getLogger(__name__)


# ============================================================================
# Objetivos
# ============================================================================

def _internal_terms(model: EnergyModel, masses: np.ndarray, z: np.ndarray):
    """Energia interna montada intervalo a intervalo: valor, gradiente, Hessiana."""
    value, first, second = interval_energy(model, masses, np.diff(z))
    gradient = np.zeros_like(z)
    gradient[:-1] -= first
    gradient[1:] += first
    diag = np.zeros_like(z)
    diag[:-1] += second
    diag[1:] += second
    return float(np.sum(value)), gradient, SymTridiagonal(diag, -second)


class ParticleObjective:
    """(k/2) sum |z_i - c_i|^2 + sum U(m / (z_{i+1} - z_i)) (z_{i+1} - z_i)."""

    def __init__(self, center, stiffness: float, particle_mass: float, model: EnergyModel):
        self.center = np.asarray(center, dtype=float)
        self.stiffness = stiffness
        self.interval_masses = np.full(self.center.size - 1, particle_mass)
        self.model = model

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        internal, gradient, hessian = _internal_terms(self.model, self.interval_masses, z)
        offset = z - self.center
        value = 0.5 * self.stiffness * float(np.dot(offset, offset)) + internal
        gradient += self.stiffness * offset
        return value, gradient, hessian.shifted(self.stiffness)


class MassNormObjective:
    """sum_k (w_k/2) ||z - y_k||_m^2 + energia interna das células.

    Os pesos podem ser negativos desde que sum_k w_k > 0.
    """

    def __init__(
        self,
        anchors: Sequence[tuple[float, np.ndarray]],
        masses,
        model: EnergyModel,
        matrix: SymTridiagonal | None = None,
    ):
        self.anchors = [(float(w), np.asarray(y, dtype=float)) for w, y in anchors]
        self.masses = np.asarray(masses, dtype=float)
        self.matrix = mass_matrix(self.masses) if matrix is None else matrix
        self.model = model
        self.weight = sum(w for w, _ in self.anchors)
        if self.weight <= 0:
            raise ValueError("a soma dos pesos quadráticos deve ser positiva")

    def quadratic_minimizer(self) -> np.ndarray:
        return sum(w * y for w, y in self.anchors) / self.weight

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        value, gradient, hessian = _internal_terms(self.model, self.masses, z)
        for w, y in self.anchors:
            offset = z - y
            value += 0.5 * w * self.matrix.quadratic_form(offset)
            gradient += w * self.matrix.matvec(offset)
        return value, gradient, hessian + self.weight * self.matrix


def objective_vps1(z, xhat, tau: float, alpha: float, m: float, model: EnergyModel):
    return ParticleObjective(xhat, m / (alpha * tau**2), m, model).evaluate(z)


def objective_vps2(z, xprime, xdoubleprime, tau: float, A: SymTridiagonal, masses, model: EnergyModel, first_step: bool):
    if first_step:
        anchors = [(3.0 / (2.0 * tau**2), xprime)]
    else:
        anchors = [(3.0 / tau**2, xprime), (-3.0 / (4.0 * tau**2), xdoubleprime)]
    return MassNormObjective(anchors, masses, model, matrix=A).evaluate(z)


# ============================================================================
# Atualizações de velocidade
# ============================================================================

def first_order_velocity(u_transport, x_new, x_target, dt: float, alpha: float) -> np.ndarray:
    """u = u' + (x - x') / (alpha dt)."""
    return np.asarray(u_transport) + (np.asarray(x_new) - np.asarray(x_target)) / (alpha * dt)


def bdf2_velocity(u_prime, u_double, x_new, x_prime, x_double, tau: float) -> np.ndarray:
    """u = 2u' - u'' + (2/tau)(x - x') - (1/(2 tau))(x - x'')."""
    x_new = np.asarray(x_new)
    return (
        2.0 * np.asarray(u_prime)
        - np.asarray(u_double)
        + 2.0 / tau * (x_new - np.asarray(x_prime))
        - 0.5 / tau * (x_new - np.asarray(x_double))
    )


# ============================================================================
# Auxiliares
# ============================================================================

def _minimize(objective, z0, config: SchemeConfig, stats: list[MinimizeStats] | None):
    z, result = minimize(objective, z0, config.trust_region)
    if stats is not None:
        stats.append(result)
    return z


def _half_min_gap(positions: np.ndarray) -> float:
    return 0.5 * float(np.min(np.diff(positions)))


def _cell_guess(objective: MassNormObjective, previous_knots: np.ndarray) -> np.ndarray:
    """Minimizador da parte quadrática, ordenado e espalhado."""
    guess, _ = sort_with_permutation(objective.quadratic_minimizer())
    return spread_initial_guess(guess, _half_min_gap(previous_knots))


def _first_order_cell_step(state: CellState, dt: float, alpha: float, config: SchemeConfig, stats):
    """Transporte + projeção, minimização com peso 1/(alpha dt^2) e velocidade de primeira ordem."""
    x_prime = transport_project(state.knots, state.velocities, dt, state.masses)
    u_prime = (x_prime - state.knots) / dt

    objective = MassNormObjective([(1.0 / (alpha * dt**2), x_prime)], state.masses, config.model)
    x_new = _minimize(objective, _cell_guess(objective, state.knots), config, stats)
    return x_new, first_order_velocity(u_prime, x_new, x_prime, dt, alpha)


# ============================================================================
# Esquemas de partículas
# ============================================================================

def vps1_step(state: ParticleState, config: SchemeConfig, stats: list[MinimizeStats] | None = None) -> ParticleState:
    tau, alpha, m = config.tau, config.alpha, state.particle_mass
    x = state.positions

    xhat, _ = sort_with_permutation(x + tau * state.velocities)
    uhat = (xhat - x) / tau

    objective = ParticleObjective(xhat, m / (alpha * tau**2), m, config.model)
    z0 = spread_initial_guess(xhat, _half_min_gap(x))
    x_new = _minimize(objective, z0, config, stats)

    u_new = first_order_velocity(uhat, x_new, xhat, tau, alpha)
    return ParticleState(x_new, u_new, m, state.time + tau)


def pm1_step(state: ParticleState, config: SchemeConfig, stats: list[MinimizeStats] | None = None) -> ParticleState:
    """Passo JKO; a velocidade de saída é a de Darcy (x^{n+1} - x^n) / tau."""
    tau, m = config.tau, state.particle_mass
    x = state.positions

    objective = ParticleObjective(x, m / tau, m, config.model)
    x_new = _minimize(objective, x, config, stats)
    return ParticleState(x_new, (x_new - x) / tau, m, state.time + tau)


# ============================================================================
# Esquemas de células
# ============================================================================

def vps1a_step(history: Bdf2History, config: SchemeConfig, stats: list[MinimizeStats] | None = None) -> CellState:
    state = history.current
    x_new, u_new = _first_order_cell_step(state, config.tau, config.alpha, config, stats)
    return CellState(x_new, state.masses, u_new, state.time + config.tau)


def vps2_step(history: Bdf2History, config: SchemeConfig, stats: list[MinimizeStats] | None = None) -> CellState:
    tau = config.tau
    current = history.current

    if history.first_step:
        x_new, u_new = _first_order_cell_step(current, tau, 2.0 / 3.0, config, stats)
        return CellState(x_new, current.masses, u_new, current.time + tau)

    previous = history.previous
    masses = current.masses

    x_prime = transport_project(current.knots, current.velocities, tau, masses)
    u_prime = (x_prime - current.knots) / tau

    blended = (2.0 * current.velocities + previous.velocities) / 3.0
    x_double = transport_project(previous.knots, blended, 2.0 * tau, masses)
    u_double = (x_double - previous.knots) / (2.0 * tau)

    objective = MassNormObjective(
        [(3.0 / tau**2, x_prime), (-3.0 / (4.0 * tau**2), x_double)], masses, config.model
    )
    x_new = _minimize(objective, _cell_guess(objective, current.knots), config, stats)

    u_new = bdf2_velocity(u_prime, u_double, x_new, x_prime, x_double, tau)
    return CellState(x_new, masses, u_new, current.time + tau)


def pm2_step(history: Bdf2History, config: SchemeConfig, stats: list[MinimizeStats] | None = None) -> CellState:
    """BDF2 para meios porosos; velocidade de saída = derivada BDF2 das posições."""
    tau = config.tau
    current = history.current
    x = current.knots

    if history.first_step:
        anchors = [(1.0 / tau, x)]
    else:
        anchors = [(2.0 / tau, x), (-1.0 / (2.0 * tau), history.previous.knots)]

    objective = MassNormObjective(anchors, current.masses, config.model)
    x_new = _minimize(objective, x, config, stats)

    if history.first_step:
        velocity = (x_new - x) / tau
    else:
        velocity = (3.0 * x_new - 4.0 * x + history.previous.knots) / (2.0 * tau)
    return CellState(x_new, current.masses, velocity, current.time + tau)


def dirk2_step(state: CellState, config: SchemeConfig, stats: list[MinimizeStats] | None = None) -> CellState:
    """DIRK de dois estágios: Euler implícito com tau/4, depois o estágio reduzido."""
    tau = config.tau
    masses = state.masses

    x_quarter, v_quarter = _first_order_cell_step(state, tau / 4.0, 1.0, config, stats)

    x_a = transport_project(x_quarter, v_quarter, 0.75 * tau, masses)
    u_a = (x_a - x_quarter) / (0.75 * tau)
    blended = (state.velocities + 2.0 * v_quarter) / 3.0
    x_b = transport_project(state.knots, blended, tau, masses)
    u_b = (x_b - state.knots) / tau

    objective = MassNormObjective([(24.0 / tau**2, x_a), (-15.0 / tau**2, x_b)], masses, config.model)
    x_new = _minimize(objective, _cell_guess(objective, state.knots), config, stats)

    u_new = 6.0 * u_a - 5.0 * u_b + 8.0 / tau * (x_new - x_a) - 5.0 / tau * (x_new - x_b)
    return CellState(x_new, masses, u_new, state.time + tau)


# ============================================================================
# Fábrica
# ============================================================================

class Stepper:
    """Avança qualquer esquema guardando o histórico que ele precisa.

    `time` fixa o instante do novo estado (t0 + n tau sem acúmulo de
    arredondamento); o histórico guarda exatamente o estado devolvido.
    """

    def __init__(self, config: SchemeConfig):
        self.config = config
        self._history: Bdf2History | None = None

    def _advance(self, state, stats: list[MinimizeStats] | None):
        scheme = self.config.scheme
        if scheme == SchemeKind.VPS1:
            return vps1_step(state, self.config, stats)
        if scheme == SchemeKind.PM1:
            return pm1_step(state, self.config, stats)
        if scheme == SchemeKind.DIRK2:
            return dirk2_step(state, self.config, stats)

        history = self._history
        if history is None or history.current is not state:
            history = Bdf2History(current=state)
            self._history = history
        if scheme == SchemeKind.VPS1a:
            return vps1a_step(history, self.config, stats)
        if scheme == SchemeKind.VPS2:
            return vps2_step(history, self.config, stats)
        return pm2_step(history, self.config, stats)

    def step(self, state, stats: list[MinimizeStats] | None = None, time: float | None = None):
        new_state = self._advance(state, stats)
        if time is not None:
            new_state = replace(new_state, time=time)
        if self._history is not None:
            self._history = self._history.advance(new_state)
        return new_state


def make_stepper(config: SchemeConfig) -> Stepper:
    logger.debug("stepper %s com tau=%g, alpha=%g", config.scheme.value, config.tau, config.alpha)
    return Stepper(config)
