from dataclasses import dataclass

from app.core.exceptions import DomainError
from app.enums.wave_pattern import WaveKind, WavePattern


@dataclass(frozen=True)
class RiemannData:
    """Dois blocos de gás, [x_l, x_c] e [x_c, x_r], cercados por vácuo."""

    x_l: float
    x_r: float
    rho_l: float
    rho_r: float
    u_l: float
    u_r: float
    gamma: float
    x_c: float = 0.0

    def __post_init__(self):
        if self.gamma <= 1:
            raise DomainError("gamma deve ser maior que 1")
        if self.rho_l <= 0 or self.rho_r <= 0:
            raise DomainError("densidades laterais devem ser positivas")
        if not self.x_l < self.x_c < self.x_r:
            raise DomainError("é preciso x_l < x_c < x_r")

    @property
    def theta(self) -> float:
        return (self.gamma - 1) / 2

    @property
    def kappa(self) -> float:
        return self.theta**2 / self.gamma


@dataclass(frozen=True)
class WaveLine:
    """Fronteira x = origin + speed * t de uma região da solução."""

    origin: float
    speed: float

    def at(self, t: float) -> float:
        return self.origin + self.speed * t


@dataclass(frozen=True)
class RiemannSolution:
    """Estado intermediário e geometria das ondas antes da primeira interação."""

    pattern: WavePattern
    left_wave: WaveKind
    right_wave: WaveKind
    rho_m: float
    u_m: float
    s_l: float | None
    s_r: float | None
    t_max: float
    boundaries: tuple[WaveLine, ...]
