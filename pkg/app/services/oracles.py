"""Soluções exatas e de referência usadas na validação.

Todas expõem a mesma interface (`ExactSolution`): densidade, velocidade,
CDF, quantil, pontos de quebra, energia total e discretização numa malha
fina de massa.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import betainc, betaincinv, gamma as gamma_fn, ndtr, ndtri

from app.core.exceptions import DomainError, UnsupportedPatternError, ValidityHorizonError
from app.enums.wave_pattern import WaveKind, WavePattern
from app.models.cell_state import CellState
from app.models.energy_model import EnergyModel
from app.models.measure import PiecewiseMeasure
from app.models.riemann import RiemannData, RiemannSolution, WaveLine
from app.services.physics import EnergyBreakdown, energy_density, total_energy_cells

logger = logging.getLogger(__name__)

# Massa mínima das caudas em suportes ilimitados
TAIL_MASS = 1e-15
TAIL_POINTS = 30


def _output(values):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def _check_time(t: float) -> float:
    if not t > 0:
        raise DomainError(f"instante t deve ser positivo (t={t})")
    return float(t)


# ============================================================================
# Interface comum
# ============================================================================

class ExactSolution(ABC):
    """Solução avaliável em (t, x) e em coordenadas de massa."""

    @abstractmethod
    def density(self, t: float, x): ...

    @abstractmethod
    def velocity(self, t: float, x): ...

    @abstractmethod
    def cdf(self, t: float, x): ...

    @abstractmethod
    def quantile(self, t: float, s): ...

    @abstractmethod
    def breakpoints(self, t: float) -> np.ndarray:
        """Pontos x onde o perfil perde suavidade, incluindo as pontas do suporte (podem ser infinitas)."""

    def mass_breakpoints(self, t: float) -> np.ndarray:
        points = self.breakpoints(t)
        return np.asarray(self.cdf(t, points[np.isfinite(points)]), dtype=float).reshape(-1)

    def mass_grid(self, t: float, resolution: int) -> np.ndarray:
        """Malha s uniforme + massas de quebra (+ refinamento geométrico das caudas)."""
        grid = [np.linspace(0.0, 1.0, resolution + 1), self.mass_breakpoints(t)]
        points = self.breakpoints(t)
        unbounded = not (np.isfinite(points[0]) and np.isfinite(points[-1]))
        if unbounded:
            tail = np.geomspace(TAIL_MASS, 1.0 / resolution, TAIL_POINTS)
            grid += [tail, 1.0 - tail]
        s = np.unique(np.clip(np.concatenate(grid), 0.0, 1.0))
        if unbounded:
            s = np.unique(np.clip(s, TAIL_MASS, 1.0 - TAIL_MASS))
        return s

    def discretize(self, t: float, resolution: int) -> PiecewiseMeasure:
        """Medida de densidade constante por partes com F^{-1} amostrada em `mass_grid`."""
        s = self.mass_grid(t, resolution)
        knots = np.maximum.accumulate(np.asarray(self.quantile(t, s), dtype=float))
        masses = np.diff(s)
        # caudas cortadas em suportes ilimitados: renormaliza a massa
        return PiecewiseMeasure(knots, masses / masses.sum())

    def energy(self, t: float, model: EnergyModel) -> EnergyBreakdown:
        """Energias cinética e interna por quadratura, peça a peça."""
        points = self.breakpoints(t)
        kinetic = internal = 0.0
        for a, b in zip(points[:-1], points[1:]):
            if not b > a:
                continue
            kinetic += quad(lambda x: 0.5 * self.density(t, x) * self.velocity(t, x) ** 2, a, b, limit=200)[0]
            internal += quad(lambda x: energy_density(model, self.density(t, x)), a, b, limit=200)[0]
        return EnergyBreakdown(kinetic, internal, kinetic + internal)


# ============================================================================
# Barenblatt
# ============================================================================

@dataclass(frozen=True)
class BarenblattConstants:
    alpha: float
    beta: float
    k: float
    C: float
    exponent: float  # 1 / (gamma - 1)


def barenblatt_constants(gamma: float) -> BarenblattConstants:
    if not gamma > 1:
        raise DomainError("Barenblatt exige gamma > 1")
    alpha = beta = 1.0 / (gamma + 1.0)
    k = (gamma - 1.0) / (2.0 * gamma * (gamma + 1.0))
    p = 1.0 / (gamma - 1.0)
    # massa unitária: C^{2p+1} B(1/2, p+1) / sqrt(k) = 1
    beta_fn = gamma_fn(0.5) * gamma_fn(p + 1.0) / gamma_fn(p + 1.5)
    C = (np.sqrt(k) / beta_fn) ** (1.0 / (2.0 * p + 1.0))
    return BarenblattConstants(alpha, beta, k, float(C), p)


def barenblatt(t: float, x, gamma: float, kappa: float = 1.0):
    """Perfil de Barenblatt de massa 1 para rho_t = (kappa rho^gamma)_xx."""
    return BarenblattSolution(gamma, kappa).density(t, x)


class BarenblattSolution(ExactSolution):
    """Para kappa != 1 usa-se a mudança de tempo t -> kappa t."""

    def __init__(self, gamma: float, kappa: float = 1.0):
        if not kappa > 0:
            raise DomainError("kappa deve ser positivo")
        self.gamma = gamma
        self.kappa = kappa
        self.constants = barenblatt_constants(gamma)

    def half_width(self, t: float) -> float:
        c = self.constants
        return c.C * (self.kappa * _check_time(t)) ** c.beta / np.sqrt(c.k)

    def density(self, t, x):
        c = self.constants
        s = self.kappa * _check_time(t)
        x = np.asarray(x, dtype=float)
        core = np.maximum(c.C**2 - c.k * s ** (-2.0 * c.beta) * x**2, 0.0)
        return _output(s ** (-c.alpha) * core**c.exponent)

    def velocity(self, t, x):
        return _output(np.asarray(x, dtype=float) / ((self.gamma + 1.0) * _check_time(t)))

    def cdf(self, t, x):
        a = self.half_width(t)
        w = np.clip((1.0 + np.asarray(x, dtype=float) / a) / 2.0, 0.0, 1.0)
        p = self.constants.exponent
        return _output(betainc(p + 1.0, p + 1.0, w))

    def quantile(self, t, s):
        a = self.half_width(t)
        p = self.constants.exponent
        w = betaincinv(p + 1.0, p + 1.0, np.clip(np.asarray(s, dtype=float), 0.0, 1.0))
        return _output(a * (2.0 * w - 1.0))

    def breakpoints(self, t):
        a = self.half_width(t)
        return np.array([-a, a])


# ============================================================================
# Calor
# ============================================================================

def heat_kernel(t: float, x):
    """(4 pi t)^{-1/2} exp(-x^2 / (4t))."""
    t = _check_time(t)
    x = np.asarray(x, dtype=float)
    return _output(np.exp(-(x**2) / (4.0 * t)) / np.sqrt(4.0 * np.pi * t))


class HeatKernelSolution(ExactSolution):
    def density(self, t, x):
        return heat_kernel(t, x)

    def velocity(self, t, x):
        return _output(np.asarray(x, dtype=float) / (2.0 * _check_time(t)))

    def cdf(self, t, x):
        return _output(ndtr(np.asarray(x, dtype=float) / np.sqrt(2.0 * _check_time(t))))

    def quantile(self, t, s):
        return _output(np.sqrt(2.0 * _check_time(t)) * ndtri(np.asarray(s, dtype=float)))

    def breakpoints(self, t):
        _check_time(t)
        return np.array([-np.inf, np.inf])


# ============================================================================
# Riemann
# ============================================================================

@dataclass(frozen=True)
class _Constant:
    rho: float
    u: float

    def density(self, t, x):
        return np.full(np.shape(x), self.rho)

    def velocity(self, t, x):
        return np.full(np.shape(x), self.u)

    def mass(self, t, a, x):
        return self.rho * (x - a)

    def locate(self, t, a, mu):
        return a + mu / self.rho


@dataclass(frozen=True)
class _Fan:
    """Leque centrado em `origin`.

    Família 1: u + rho^theta = invariant. Família 2: u - rho^theta = invariant.
    Em ambos os casos rho^theta = c0 + c1 x é afim em x.
    """

    origin: float
    family: int
    invariant: float
    theta: float

    def _coefficients(self, t):
        scale = 1.0 / ((1.0 + self.theta) * t)
        if self.family == 1:
            return (self.invariant + self.origin / t) / (1.0 + self.theta), -scale
        return (-self.origin / t - self.invariant) / (1.0 + self.theta), scale

    def _base(self, t, x):
        c0, c1 = self._coefficients(t)
        return np.maximum(c0 + c1 * np.asarray(x, dtype=float), 0.0)

    def density(self, t, x):
        return self._base(t, x) ** (1.0 / self.theta)

    def velocity(self, t, x):
        base = self._base(t, x)
        return self.invariant - base if self.family == 1 else self.invariant + base

    def mass(self, t, a, x):
        _, c1 = self._coefficients(t)
        q = 1.0 / self.theta + 1.0
        return (self._base(t, x) ** q - self._base(t, a) ** q) / (q * c1)

    def locate(self, t, a, mu):
        c0, c1 = self._coefficients(t)
        q = 1.0 / self.theta + 1.0
        base = np.maximum(self._base(t, a) ** q + mu * q * c1, 0.0) ** (1.0 / q)
        return (base - c0) / c1


def _wave_function(rho, rho_k: float, theta: float, kappa: float, gamma: float) -> float:
    """Curva de onda: ramo de choque para rho > rho_k, de rarefação caso contrário."""
    if rho > rho_k:
        jump = kappa * (rho**gamma - rho_k**gamma)
        return float(np.sqrt(jump * (rho - rho_k) / (rho * rho_k)))
    return float(rho**theta - rho_k**theta)


def _wave_structure(data: RiemannData, rho_m: float, u_m: float, left: WaveKind, right: WaveKind):
    """Fronteiras (da esquerda para a direita) e as regiões entre elas."""
    theta = data.theta
    c_l, c_r = data.rho_l**theta, data.rho_r**theta
    c_m = rho_m**theta

    lines = [
        WaveLine(data.x_l, data.u_l - c_l),
        WaveLine(data.x_l, data.u_l + theta * c_l),
    ]
    segments: list = [_Fan(data.x_l, 2, data.u_l - c_l, theta), _Constant(data.rho_l, data.u_l)]

    if left == WaveKind.Shock:
        lines.append(WaveLine(data.x_c, (rho_m * u_m - data.rho_l * data.u_l) / (rho_m - data.rho_l)))
    else:
        lines += [WaveLine(data.x_c, data.u_l - theta * c_l), WaveLine(data.x_c, u_m - theta * c_m)]
        segments.append(_Fan(data.x_c, 1, data.u_l + c_l, theta))
    segments.append(_Constant(rho_m, u_m))

    if right == WaveKind.Shock:
        lines.append(WaveLine(data.x_c, (rho_m * u_m - data.rho_r * data.u_r) / (rho_m - data.rho_r)))
    else:
        lines += [WaveLine(data.x_c, u_m + theta * c_m), WaveLine(data.x_c, data.u_r + theta * c_r)]
        segments.append(_Fan(data.x_c, 2, data.u_r - c_r, theta))
    segments.append(_Constant(data.rho_r, data.u_r))

    lines += [
        WaveLine(data.x_r, data.u_r - theta * c_r),
        WaveLine(data.x_r, data.u_r + c_r),
    ]
    segments.append(_Fan(data.x_r, 1, data.u_r + c_r, theta))
    return lines, segments


def _first_crossing(lines: list[WaveLine]) -> float:
    t_max = np.inf
    for left, right in zip(lines, lines[1:]):
        closing = left.speed - right.speed
        if closing > 0:
            t_max = min(t_max, (right.origin - left.origin) / closing)
    return float(t_max)


_PATTERNS = {
    (WaveKind.Shock, WaveKind.Shock): WavePattern.ShockShock,
    (WaveKind.Shock, WaveKind.Rarefaction): WavePattern.ShockRarefaction,
    (WaveKind.Rarefaction, WaveKind.Shock): WavePattern.RarefactionShock,
    (WaveKind.Rarefaction, WaveKind.Rarefaction): WavePattern.RarefactionRarefaction,
}


def solve_riemann_intermediate(data: RiemannData) -> RiemannSolution:
    """Estado intermediário (rho_m, u_m) pela interseção das curvas de onda.

    Resolve phi_l(rho) + phi_r(rho) + u_r - u_l = 0 com brentq; a função é
    crescente em rho.
    """
    theta, kappa, gamma = data.theta, data.kappa, data.gamma
    c_l, c_r = data.rho_l**theta, data.rho_r**theta
    if data.u_r - data.u_l >= c_l + c_r:
        raise UnsupportedPatternError("os dados formam vácuo entre as ondas")

    def residual(rho):
        return (
            _wave_function(rho, data.rho_l, theta, kappa, gamma)
            + _wave_function(rho, data.rho_r, theta, kappa, gamma)
            + data.u_r
            - data.u_l
        )

    upper = max(data.rho_l, data.rho_r)
    while residual(upper) <= 0:
        upper *= 2.0
    rho_m = brentq(residual, 0.0, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)

    phi_l = _wave_function(rho_m, data.rho_l, theta, kappa, gamma)
    phi_r = _wave_function(rho_m, data.rho_r, theta, kappa, gamma)
    u_m = 0.5 * (data.u_l + data.u_r) + 0.5 * (phi_r - phi_l)

    left = WaveKind.Shock if rho_m > data.rho_l else WaveKind.Rarefaction
    right = WaveKind.Shock if rho_m > data.rho_r else WaveKind.Rarefaction
    lines, _ = _wave_structure(data, rho_m, u_m, left, right)

    def shock_speed(rho, u):
        return (rho_m * u_m - rho * u) / (rho_m - rho)

    solution = RiemannSolution(
        pattern=_PATTERNS[(left, right)],
        left_wave=left,
        right_wave=right,
        rho_m=float(rho_m),
        u_m=float(u_m),
        s_l=shock_speed(data.rho_l, data.u_l) if left == WaveKind.Shock else None,
        s_r=shock_speed(data.rho_r, data.u_r) if right == WaveKind.Shock else None,
        t_max=_first_crossing(lines),
        boundaries=tuple(lines),
    )
    logger.debug("Riemann %s: rho_m=%.6f u_m=%.6f t_max=%.4f", solution.pattern.value, rho_m, u_m, solution.t_max)
    return solution


class RiemannExact(ExactSolution):
    """Solução de Riemann com vácuo dos dois lados, válida até t_max."""

    def __init__(self, data: RiemannData, solution: RiemannSolution | None = None):
        self.data = data
        self.solution = solve_riemann_intermediate(data) if solution is None else solution
        s = self.solution
        self.lines, self.segments = _wave_structure(data, s.rho_m, s.u_m, s.left_wave, s.right_wave)

    def _positions(self, t: float) -> np.ndarray:
        t = _check_time(t)
        if t > self.solution.t_max * (1.0 + 1e-12):
            raise ValidityHorizonError(
                f"t={t} além do horizonte de validade t_max={self.solution.t_max:.6g}"
            )
        return np.array([line.at(t) for line in self.lines])

    def _cumulative(self, t: float, positions: np.ndarray) -> np.ndarray:
        masses = [seg.mass(t, a, b) for seg, a, b in zip(self.segments, positions[:-1], positions[1:])]
        return np.concatenate(([0.0], np.cumsum(masses)))

    def _evaluate(self, t, x, field: str):
        positions = self._positions(t)
        x = np.asarray(x, dtype=float)
        index = np.searchsorted(positions, x, side="right") - 1
        result = np.zeros(x.shape)
        for k, segment in enumerate(self.segments):
            mask = index == k
            if np.any(mask):
                result[mask] = getattr(segment, field)(t, x[mask])
        return _output(result)

    def density(self, t, x):
        return self._evaluate(t, x, "density")

    def velocity(self, t, x):
        return self._evaluate(t, x, "velocity")

    def cdf(self, t, x):
        positions = self._positions(t)
        cumulative = self._cumulative(t, positions)
        x = np.asarray(x, dtype=float)
        index = np.searchsorted(positions, x, side="right") - 1
        result = np.where(index >= len(self.segments), cumulative[-1], 0.0)
        for k, segment in enumerate(self.segments):
            mask = index == k
            if np.any(mask):
                result[mask] = cumulative[k] + segment.mass(t, positions[k], x[mask])
        return _output(result)

    def quantile(self, t, s):
        positions = self._positions(t)
        cumulative = self._cumulative(t, positions)
        s = np.asarray(s, dtype=float)
        index = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, len(self.segments) - 1)
        result = np.empty(s.shape)
        for k, segment in enumerate(self.segments):
            mask = index == k
            if np.any(mask):
                x = segment.locate(t, positions[k], s[mask] - cumulative[k])
                result[mask] = np.clip(x, positions[k], positions[k + 1])
        return _output(result)

    def breakpoints(self, t):
        return self._positions(t)

    def mass_breakpoints(self, t):
        return self._cumulative(t, self._positions(t))


def riemann_density(solution: RiemannSolution, data: RiemannData, t: float, x):
    return RiemannExact(data, solution).density(t, x)


def riemann_velocity(solution: RiemannSolution, data: RiemannData, t: float, x):
    return RiemannExact(data, solution).velocity(t, x)


# ============================================================================
# Referência numérica
# ============================================================================

class ReferenceSolution(ExactSolution):
    """Solução de referência dada por uma simulação fina, válida só em state.time."""

    def __init__(self, state: CellState):
        self.state = state

    def _check(self, t: float) -> None:
        if abs(t - self.state.time) > 1e-9 * max(1.0, abs(t)):
            raise ValidityHorizonError(
                f"referência disponível apenas em t={self.state.time:.6g} (pedido t={t:.6g})"
            )

    def density(self, t, x):
        self._check(t)
        st = self.state
        x = np.asarray(x, dtype=float)
        values = np.interp(x, st.midpoints, st.densities)
        inside = (x >= st.knots[0]) & (x <= st.knots[-1])
        return _output(np.where(inside, values, 0.0))

    def velocity(self, t, x):
        self._check(t)
        return _output(np.interp(np.asarray(x, dtype=float), self.state.knots, self.state.velocities))

    def cdf(self, t, x):
        self._check(t)
        return _output(np.interp(np.asarray(x, dtype=float), self.state.knots, self.state.mass_nodes))

    def quantile(self, t, s):
        self._check(t)
        return _output(np.interp(np.asarray(s, dtype=float), self.state.mass_nodes, self.state.knots))

    def breakpoints(self, t):
        self._check(t)
        return np.asarray(self.state.knots)

    def mass_breakpoints(self, t):
        self._check(t)
        return np.asarray(self.state.mass_nodes)

    def discretize(self, t, resolution):
        self._check(t)
        return self.state.as_measure()

    def energy(self, t, model):
        self._check(t)
        return total_energy_cells(self.state, model)
