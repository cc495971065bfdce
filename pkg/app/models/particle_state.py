from dataclasses import dataclass

import numpy as np

from app.core.exceptions import InvalidStateError
from app.models.measure import PiecewiseMeasure


def frozen_array(values, name: str) -> np.ndarray:
    """Copia para float64 somente leitura e rejeita valores não finitos."""
    array = np.array(values, dtype=float)
    if array.ndim != 1:
        raise InvalidStateError(f"'{name}' deve ser um vetor")
    if not np.all(np.isfinite(array)):
        raise InvalidStateError(f"'{name}' contém valores não finitos")
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class ParticleState:
    """Configuração de N partículas de massa igual m = 1/N (VPS1 / PM1)."""

    positions: np.ndarray
    velocities: np.ndarray
    particle_mass: float
    time: float = 0.0

    def __post_init__(self):
        positions = frozen_array(self.positions, "positions")
        velocities = frozen_array(self.velocities, "velocities")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "velocities", velocities)
        object.__setattr__(self, "particle_mass", float(self.particle_mass))
        object.__setattr__(self, "time", float(self.time))

        n = positions.size
        if n < 2:
            raise InvalidStateError("são necessárias pelo menos 2 partículas")
        if velocities.size != n:
            raise InvalidStateError("positions e velocities devem ter o mesmo tamanho")
        if self.particle_mass <= 0 or abs(n * self.particle_mass - 1.0) > 1e-12:
            raise InvalidStateError("a massa das partículas deve satisfazer N*m = 1")
        if np.any(np.diff(positions) <= 0):
            raise InvalidStateError("as posições devem ser estritamente crescentes")

    @property
    def n(self) -> int:
        return self.positions.size

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.positions)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.positions[:-1] + self.positions[1:])

    @property
    def densities(self) -> np.ndarray:
        """Densidade discreta m / (x_{i+1} - x_i) em cada intervalo."""
        return self.particle_mass / self.gaps

    @property
    def interval_velocities(self) -> np.ndarray:
        return 0.5 * (self.velocities[:-1] + self.velocities[1:])

    def as_measure(self) -> PiecewiseMeasure:
        return PiecewiseMeasure.from_atoms(self.positions, np.full(self.n, self.particle_mass))
