from enum import Enum

class KnotLayout(str, Enum):
    """Como nós e massas iniciais das células são escolhidos."""
    Uniform = "Uniform"
    SqrtWeighted = "SqrtWeighted"
    EqualMass = "EqualMass"
    EndpointRefined = "EndpointRefined"
    TailWeighted = "TailWeighted"
