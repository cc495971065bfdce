from enum import Enum

class ProblemKind(str, Enum):
    PorousMedium = "PorousMedium"
    Heat = "Heat"
    IsentropicEuler = "IsentropicEuler"
    IsothermalEuler = "IsothermalEuler"
