from enum import Enum

class EnergyKind(str, Enum):
    """Lei de energia interna U(rho)."""
    Polytropic = "Polytropic"
    Isothermal = "Isothermal"
    Pressureless = "Pressureless"  # U = 0, usado em testes de transporte livre
