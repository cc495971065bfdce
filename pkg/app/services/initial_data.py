"""Dados iniciais: perfis de densidade e a construção de estados discretos."""

import math
from abc import ABC, abstractmethod

import numpy as np
from scipy.optimize import brentq

from app.core.exceptions import DomainError
from app.enums.initial_data_kind import InitialDataKind
from app.enums.knot_layout import KnotLayout
from app.models.cell_state import CellState
from app.models.measure import PiecewiseMeasure
from app.models.particle_state import ParticleState
from app.models.riemann import RiemannData
from app.services.oracles import BarenblattSolution, ExactSolution, HeatKernelSolution


def _output(values):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


class DensityProfile(ABC):
    """Densidade de massa 1 e velocidade iniciais, num instante `time`."""

    time: float = 0.0

    @abstractmethod
    def density(self, x): ...

    @abstractmethod
    def velocity(self, x): ...

    @abstractmethod
    def cdf(self, x): ...

    @abstractmethod
    def quantile(self, s): ...

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]: ...


class BlockProfile(DensityProfile):
    """Blocos contíguos [a_k, b_k] com densidade e velocidade constantes."""

    def __init__(self, blocks: list[tuple[float, float, float, float]]):
        if not blocks:
            raise DomainError("perfil sem blocos")
        edges = [blocks[0][0]]
        for (a, b, rho, _), nxt in zip(blocks, blocks[1:] + [None]):
            if not b > a or rho <= 0:
                raise DomainError("cada bloco precisa de a < b e densidade positiva")
            if nxt is not None and nxt[0] != b:
                raise DomainError("os blocos devem ser contíguos")
            edges.append(b)

        self.edges = np.array(edges, dtype=float)
        masses = np.array([rho * (b - a) for a, b, rho, _ in blocks])
        total = math.fsum(masses)
        if total <= 0:
            raise DomainError("perfil com massa zero")
        self.rho = np.array([rho for _, _, rho, _ in blocks]) / total
        self.u = np.array([u for _, _, _, u in blocks], dtype=float)
        self.cumulative = np.concatenate(([0.0], np.cumsum(masses / total)))
        self.cumulative[-1] = 1.0

    @property
    def support(self):
        return float(self.edges[0]), float(self.edges[-1])

    def _block(self, x):
        return np.searchsorted(self.edges, x, side="right") - 1

    def density(self, x):
        x = np.asarray(x, dtype=float)
        index = self._block(x)
        inside = (index >= 0) & (index < self.rho.size)
        return _output(np.where(inside, self.rho[np.clip(index, 0, self.rho.size - 1)], 0.0))

    def velocity(self, x):
        """Valor do bloco; numa junção interna, a média dos dois lados."""
        x = np.asarray(x, dtype=float)
        index = np.clip(self._block(x), 0, self.u.size - 1)
        values = self.u[index]
        interior = self.edges[1:-1]
        for k, edge in enumerate(interior):
            values = np.where(x == edge, 0.5 * (self.u[k] + self.u[k + 1]), values)
        return _output(values)

    def cdf(self, x):
        return _output(np.interp(x, self.edges, self.cumulative))

    def quantile(self, s):
        return _output(np.interp(s, self.cumulative, self.edges))


class ParabolicProfile(DensityProfile):
    """(3/8)(1 - x^2/4)_+ em repouso."""

    @property
    def support(self):
        return -2.0, 2.0

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return _output(0.375 * np.maximum(1.0 - x**2 / 4.0, 0.0))

    def velocity(self, x):
        return _output(np.zeros(np.shape(x)))

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
        return _output(0.375 * ((x + 2.0) - (x**3 + 8.0) / 12.0))

    def quantile(self, s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)

        def invert(level):
            if level <= 0.0:
                return -2.0
            if level >= 1.0:
                return 2.0
            return brentq(lambda x: self.cdf(x) - level, -2.0, 2.0, xtol=1e-15)

        return _output(np.vectorize(invert, otypes=[float])(s))


class ExactProfile(DensityProfile):
    """Solução exata congelada no instante t0."""

    def __init__(self, solution: ExactSolution, t0: float):
        self.solution = solution
        self.time = float(t0)

    @property
    def support(self):
        points = self.solution.breakpoints(self.time)
        return float(points[0]), float(points[-1])

    def density(self, x):
        return self.solution.density(self.time, x)

    def velocity(self, x):
        return self.solution.velocity(self.time, x)

    def cdf(self, x):
        return self.solution.cdf(self.time, x)

    def quantile(self, s):
        return self.solution.quantile(self.time, s)


# ============================================================================
# Receitas
# ============================================================================

def riemann_data_for(kind: InitialDataKind, gamma: float) -> RiemannData:
    if kind == InitialDataKind.ShockShock:
        return RiemannData(x_l=-2.0, x_r=2.0, rho_l=0.25, rho_r=0.25, u_l=1.0, u_r=0.0, gamma=gamma)
    if kind == InitialDataKind.ShockRarefaction:
        return RiemannData(x_l=-1.0, x_r=2.0, rho_l=0.5, rho_r=0.25, u_l=0.0, u_r=0.0, gamma=gamma)
    if kind == InitialDataKind.RarefactionRarefaction:
        return RiemannData(x_l=-2.0, x_r=2.0, rho_l=0.25, rho_r=0.25, u_l=-0.5, u_r=0.5, gamma=gamma)
    raise DomainError(f"{kind.value} não é um dado de Riemann")


def profile_for(
    kind: InitialDataKind,
    gamma: float | None = None,
    kappa: float | None = None,
    t0: float = 1.0,
    support: tuple[float, float] = (0.0, 1.0),
    velocity: float = 0.0,
) -> DensityProfile:
    if kind == InitialDataKind.DiracBlock:
        return BlockProfile([(-0.01, 0.01, 50.0, 0.0)])
    if kind == InitialDataKind.AsymmetricBlock:
        return BlockProfile([(-1.0, 0.0, 0.5, 0.0), (0.0, 2.0, 0.25, 0.0)])
    if kind == InitialDataKind.Parabolic:
        return ParabolicProfile()
    if kind == InitialDataKind.Uniform:
        a, b = support
        return BlockProfile([(a, b, 1.0 / (b - a), velocity)])
    if kind == InitialDataKind.Barenblatt:
        if gamma is None:
            raise DomainError("perfil de Barenblatt exige gamma")
        return ExactProfile(BarenblattSolution(gamma, 1.0 if kappa is None else kappa), t0)
    if kind == InitialDataKind.HeatKernel:
        return ExactProfile(HeatKernelSolution(), t0)

    if gamma is None:
        raise DomainError(f"dados {kind.value} exigem gamma")
    data = riemann_data_for(kind, gamma)
    return BlockProfile([
        (data.x_l, data.x_c, data.rho_l, data.u_l),
        (data.x_c, data.x_r, data.rho_r, data.u_r),
    ])


# ============================================================================
# Estados discretos
# ============================================================================

def sqrt_weight(x):
    """f(x) = int_0^x sqrt(1 - y^2) dy / int_0^1 sqrt(1 - y^2) dy."""
    x = np.asarray(x, dtype=float)
    return _output((x * np.sqrt(1.0 - x**2) + np.arcsin(x)) * 2.0 / np.pi)


def _tail_weights(n: int) -> np.ndarray:
    def q(x):
        return 10.0 * x**2 + x / 10.0

    y = np.arange(1, n + 1) / (n + 1)
    weights = q(y) * q(1.0 - y)
    return weights / weights.sum()


def _endpoint_weights(n: int) -> np.ndarray:
    # primitiva de (x/N)(1 - x/N)
    def G(x):
        return x**2 / (2.0 * n) - x**3 / (3.0 * n**2)

    i = np.arange(1, n + 1)
    return 6.0 / n * (G(i) - G(i - 1))


def _masses_from_knots(profile: DensityProfile, knots: np.ndarray) -> np.ndarray:
    masses = np.diff(np.asarray(profile.cdf(knots), dtype=float))
    return masses / masses.sum()


def cells(profile: DensityProfile, n: int, layout: KnotLayout = KnotLayout.Uniform) -> CellState:
    """N células com nós e massas escolhidos por `layout`."""
    if n < 1:
        raise DomainError("são necessárias pelo menos 1 célula")
    a, b = profile.support
    bounded = np.isfinite(a) and np.isfinite(b)
    if not bounded and layout != KnotLayout.TailWeighted:
        raise DomainError(f"suporte ilimitado exige o layout TailWeighted, não {layout.value}")

    if layout == KnotLayout.Uniform:
        knots = np.linspace(a, b, n + 1)
        masses = _masses_from_knots(profile, knots)
    elif layout == KnotLayout.SqrtWeighted:
        center, half = 0.5 * (a + b), 0.5 * (b - a)
        knots = center + half * sqrt_weight(-1.0 + 2.0 * np.arange(n + 1) / n)
        knots[0], knots[-1] = a, b
        masses = _masses_from_knots(profile, knots)
    elif layout == KnotLayout.EqualMass:
        masses = np.full(n, 1.0 / n)
        knots = np.asarray(profile.quantile(PiecewiseMeasure.cumulative(masses)), dtype=float)
    elif layout == KnotLayout.EndpointRefined:
        masses = _endpoint_weights(n)
        knots = np.asarray(profile.quantile(PiecewiseMeasure.cumulative(masses)), dtype=float)
    else:
        if n < 3:
            raise DomainError("TailWeighted exige N >= 3")
        masses = _tail_weights(n)
        nodes = PiecewiseMeasure.cumulative(masses)
        knots = np.empty(n + 1)
        knots[1:-1] = profile.quantile(nodes[1:-1])
        knots[0] = 3.0 * knots[1] - 2.0 * knots[2]
        knots[-1] = 3.0 * knots[-2] - 2.0 * knots[-3]

    return CellState(knots, masses, profile.velocity(knots), profile.time)


def equal_mass_particles(profile: DensityProfile, n: int) -> ParticleState:
    """x_i = F^{-1}((i - 1/2) / N), m = 1/N."""
    if n < 2:
        raise DomainError("são necessárias pelo menos 2 partículas")
    positions = np.asarray(profile.quantile((np.arange(1, n + 1) - 0.5) / n), dtype=float)
    return ParticleState(positions, profile.velocity(positions), 1.0 / n, profile.time)
