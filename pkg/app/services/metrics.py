"""Erros contra soluções exatas e ordens de convergência observadas."""

import math
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.core.config import settings
from app.dtos.reportDtos import ErrorReport
from app.models.cell_state import CellState
from app.models.energy_model import EnergyModel
from app.models.particle_state import ParticleState
from app.services.oracles import ExactSolution
from app.services.physics import total_energy
from app.services.transport1d import wasserstein

_GAUSS_NODES, _GAUSS_WEIGHTS = leggauss(3)


def _intervals(state: ParticleState | CellState):
    """Pontos médios, densidades discretas e larguras dos intervalos."""
    if isinstance(state, ParticleState):
        return state.midpoints, state.densities, state.gaps
    return state.midpoints, state.densities, state.widths


def _knots(state: ParticleState | CellState) -> np.ndarray:
    return state.positions if isinstance(state, ParticleState) else state.knots


def linf_error(state, exact: ExactSolution, t: float) -> float:
    mid, dens, _ = _intervals(state)
    return float(np.max(np.abs(dens - exact.density(t, mid))))


def l1_error(state, exact: ExactSolution, t: float) -> float:
    mid, dens, widths = _intervals(state)
    return float(np.sum(widths * np.abs(dens - exact.density(t, mid))))


def center_error(state, exact: ExactSolution, t: float, x0: float = 0.0) -> float:
    """|densidade discreta em x0 - média exata nas mesmas células|.

    Num nó entram as duas células vizinhas. A referência é a massa exata
    das células dividida pela largura, sem o viés O(h^2) de comparar uma
    média de célula com o valor pontual rho*(t, x0).
    """
    knots = _knots(state)
    _, dens, widths = _intervals(state)

    hit = np.flatnonzero(knots == x0)
    if hit.size:
        k = int(hit[0])
        cells = [i for i in (k - 1, k) if 0 <= i < dens.size]
    else:
        index = int(np.searchsorted(knots, x0)) - 1
        cells = [index] if 0 <= index < dens.size else []
    if not cells:
        return float(exact.density(t, x0))

    a, b = knots[cells[0]], knots[cells[-1] + 1]
    discrete = float(np.sum(dens[cells] * widths[cells])) / (b - a)
    exact_mass = np.asarray(exact.cdf(t, np.array([a, b])), dtype=float).reshape(-1)
    return abs(discrete - float(exact_mass[1] - exact_mass[0]) / (b - a))


def wasserstein_error(state, exact: ExactSolution, t: float, resolution: int | None = None) -> float:
    reference = exact.discretize(t, resolution or settings.EXACT_RESOLUTION)
    return wasserstein(state.as_measure(), reference)


def ew_error(state: CellState, exact: ExactSolution, t: float, resolution: int | None = None) -> float:
    """sqrt(W^2 + 1/2 int_0^1 |u_n(R_n(s)) - u(R(s))|^2 ds).

    O termo de velocidade usa Gauss-Legendre de 3 pontos em cada
    sub-intervalo da partição de massa comum.
    """
    reference = exact.discretize(t, resolution or settings.EXACT_RESOLUTION)
    w = wasserstein(state.as_measure(), reference)

    nodes = np.unique(np.concatenate((state.mass_nodes, reference.mass_nodes)))
    a, b = nodes[:-1], nodes[1:]
    center, half = 0.5 * (a + b), 0.5 * (b - a)

    velocity_term = 0.0
    for xi, weight in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
        s = center + half * xi
        numeric = np.interp(s, state.mass_nodes, state.velocities)
        target = exact.velocity(t, exact.quantile(t, s))
        velocity_term += float(np.sum(weight * half * (numeric - target) ** 2))

    return math.sqrt(w**2 + 0.5 * velocity_term)


def energy_error(state, exact: ExactSolution, model: EnergyModel, t: float) -> float:
    return abs(total_energy(state, model).total - exact.energy(t, model).total)


def convergence_rates(errors: Sequence[float | None], resolutions: Sequence[float]) -> list[float | None]:
    """rate_k = log(e_{k-1} / e_k) / log(h_{k-1} / h_k); None quando indefinida."""
    rates: list[float | None] = []
    for k in range(1, len(errors)):
        e0, e1 = errors[k - 1], errors[k]
        h0, h1 = resolutions[k - 1], resolutions[k]
        if e0 is None or e1 is None or e0 <= 0 or e1 <= 0 or h0 == h1:
            rates.append(None)
        else:
            rates.append(math.log(e0 / e1) / math.log(h0 / h1))
    return rates


def evaluate_errors(
    state,
    exact: ExactSolution,
    t: float,
    model: EnergyModel | None = None,
    include_energy: bool = False,
    resolution: int | None = None,
) -> ErrorReport:
    """Todos os erros aplicáveis; E_W só para células, energia só quando pedida."""
    cellular = isinstance(state, CellState)
    return ErrorReport(
        linf=linf_error(state, exact, t),
        l1=l1_error(state, exact, t),
        center_error=center_error(state, exact, t),
        wasserstein=wasserstein_error(state, exact, t, resolution),
        e_w=ew_error(state, exact, t, resolution) if cellular else None,
        energy_error=energy_error(state, exact, model, t) if include_energy and model is not None else None,
    )
