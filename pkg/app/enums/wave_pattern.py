from enum import Enum

class WaveKind(str, Enum):
    Shock = "Shock"
    Rarefaction = "Rarefaction"

class WavePattern(str, Enum):
    """Padrão de ondas do problema de Riemann, da esquerda para a direita."""
    ShockShock = "ShockShock"
    ShockRarefaction = "ShockRarefaction"
    RarefactionShock = "RarefactionShock"
    RarefactionRarefaction = "RarefactionRarefaction"
