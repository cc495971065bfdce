import math
from dataclasses import dataclass

import numpy as np

from app.core.exceptions import InvalidStateError
from app.models.measure import PiecewiseMeasure
from app.models.particle_state import frozen_array


@dataclass(frozen=True)
class CellState:
    """Densidade constante por célula e velocidade linear por partes.

    N+1 nós estritamente crescentes, N massas fixas (soma 1) e N+1
    velocidades nodais.
    """

    knots: np.ndarray
    masses: np.ndarray
    velocities: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        knots = frozen_array(self.knots, "knots")
        masses = frozen_array(self.masses, "masses")
        velocities = frozen_array(self.velocities, "velocities")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "velocities", velocities)
        object.__setattr__(self, "time", float(self.time))

        if masses.size < 1 or knots.size != masses.size + 1:
            raise InvalidStateError("são necessários N+1 nós para N células (N >= 1)")
        if velocities.size != knots.size:
            raise InvalidStateError("deve haver uma velocidade por nó")
        if np.any(masses < 0):
            raise InvalidStateError("massas das células devem ser não negativas")
        if abs(math.fsum(masses) - 1.0) > 1e-12:
            raise InvalidStateError("as massas das células devem somar 1")
        if np.any(np.diff(knots) <= 0):
            raise InvalidStateError("os nós devem ser estritamente crescentes")

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.knots)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.knots[:-1] + self.knots[1:])

    @property
    def densities(self) -> np.ndarray:
        return self.masses / self.widths

    @property
    def interval_velocities(self) -> np.ndarray:
        return 0.5 * (self.velocities[:-1] + self.velocities[1:])

    @property
    def mass_nodes(self) -> np.ndarray:
        """s_k = soma das massas até a célula k, com s_0 = 0 e s_N = 1."""
        return PiecewiseMeasure.cumulative(self.masses)

    def as_measure(self) -> PiecewiseMeasure:
        return PiecewiseMeasure(self.knots, self.masses)


@dataclass(frozen=True)
class Bdf2History:
    """Estados em t^{n-1} e t^n para os passos de dois níveis."""

    current: CellState
    previous: CellState | None = None

    def __post_init__(self):
        if self.previous is None:
            return
        if self.previous.knots.size != self.current.knots.size:
            raise InvalidStateError("histórico com números de nós diferentes")
        if not np.array_equal(self.previous.masses, self.current.masses):
            raise InvalidStateError("histórico com massas diferentes")

    @property
    def first_step(self) -> bool:
        return self.previous is None

    def advance(self, new_state: CellState) -> "Bdf2History":
        return Bdf2History(current=new_state, previous=self.current)
