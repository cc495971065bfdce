from enum import Enum

class ExactKind(str, Enum):
    Barenblatt = "Barenblatt"
    HeatKernel = "HeatKernel"
    Riemann = "Riemann"
    Reference = "Reference"
