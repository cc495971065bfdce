from enum import Enum

class InitialDataKind(str, Enum):
    DiracBlock = "DiracBlock"
    AsymmetricBlock = "AsymmetricBlock"
    Barenblatt = "Barenblatt"
    HeatKernel = "HeatKernel"
    Parabolic = "Parabolic"
    ShockShock = "ShockShock"
    ShockRarefaction = "ShockRarefaction"
    RarefactionRarefaction = "RarefactionRarefaction"
    Uniform = "Uniform"
