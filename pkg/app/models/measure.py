import math
from dataclasses import dataclass

import numpy as np

from app.core.exceptions import InvalidStateError


def _readonly(values, name: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != 1 or not np.all(np.isfinite(array)):
        raise InvalidStateError(f"'{name}' deve ser um vetor finito")
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class PiecewiseMeasure:
    """Medida de probabilidade em R com densidade constante por intervalo.

    Intervalos de largura zero representam átomos com a massa do intervalo.
    """

    breakpoints: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        breakpoints = _readonly(self.breakpoints, "breakpoints")
        masses = _readonly(self.masses, "masses")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "masses", masses)

        if masses.size < 1 or breakpoints.size != masses.size + 1:
            raise InvalidStateError("uma medida com K intervalos exige K+1 pontos de quebra")
        if np.any(masses < 0):
            raise InvalidStateError("massas devem ser não negativas")
        if np.any(np.diff(breakpoints) < 0):
            raise InvalidStateError("pontos de quebra devem ser não decrescentes")
        if abs(math.fsum(masses) - 1.0) > 1e-12:
            raise InvalidStateError("a massa total deve ser 1")

    @staticmethod
    def cumulative(masses: np.ndarray) -> np.ndarray:
        """Nós de massa s_0 = 0 <= s_1 <= ... <= s_K = 1."""
        nodes = np.concatenate(([0.0], np.cumsum(masses)))
        nodes = np.minimum(np.maximum.accumulate(nodes), 1.0)
        nodes[-1] = 1.0
        return nodes

    @classmethod
    def from_atoms(cls, positions, weights) -> "PiecewiseMeasure":
        """Soma de Diracs: pontos (x1, x1, x2, x2, ...) e massas (w1, 0, w2, 0, ...)."""
        positions = np.asarray(positions, dtype=float)
        weights = np.asarray(weights, dtype=float)
        order = np.argsort(positions, kind="stable")
        positions, weights = positions[order], weights[order]

        masses = np.zeros(2 * positions.size - 1)
        masses[0::2] = weights
        return cls(np.repeat(positions, 2), masses)

    @property
    def mass_nodes(self) -> np.ndarray:
        return self.cumulative(self.masses)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])


@dataclass(frozen=True)
class InverseCdf:
    """F^{-1} linear por partes sobre os nós de massa.

    Só os segmentos de massa positiva são guardados; eles cobrem [0, 1] de
    forma contígua. Átomos viram segmentos constantes.
    """

    mass_lo: np.ndarray
    mass_hi: np.ndarray
    value_lo: np.ndarray
    value_hi: np.ndarray

    @classmethod
    def from_measure(cls, measure: PiecewiseMeasure) -> "InverseCdf":
        nodes = measure.mass_nodes
        values = measure.breakpoints
        positive = nodes[1:] > nodes[:-1]
        return cls(
            mass_lo=nodes[:-1][positive],
            mass_hi=nodes[1:][positive],
            value_lo=values[:-1][positive],
            value_hi=values[1:][positive],
        )

    @property
    def nodes(self) -> np.ndarray:
        return np.concatenate((self.mass_lo[:1], self.mass_hi))

    def locate(self, s) -> np.ndarray:
        """Índice do segmento que contém s (convenção contínua à direita)."""
        index = np.searchsorted(self.mass_hi, s, side="right")
        return np.clip(index, 0, self.mass_hi.size - 1)

    def evaluate_in(self, s, index) -> np.ndarray:
        """Avalia o interpolante afim do segmento `index` em s."""
        s = np.asarray(s, dtype=float)
        lo, hi = self.mass_lo[index], self.mass_hi[index]
        fraction = (s - lo) / (hi - lo)
        return self.value_lo[index] + fraction * (self.value_hi[index] - self.value_lo[index])

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        result = self.evaluate_in(s, self.locate(s))
        return float(result) if result.ndim == 0 else result
