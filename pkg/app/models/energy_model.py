from pydantic import BaseModel, ConfigDict, model_validator

from app.enums.energy_kind import EnergyKind


class EnergyModel(BaseModel):
    """Lei de energia interna.

    Polytropic: U(rho) = kappa rho^gamma / (gamma - 1), P = kappa rho^gamma.
    Isothermal: U(rho) = rho log rho, P = rho.
    Pressureless: U = 0 (transporte livre).

    Sem `kappa` explícito usa-se a normalização kappa = theta^2 / gamma,
    theta = (gamma - 1) / 2.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: EnergyKind = EnergyKind.Polytropic
    gamma: float | None = None
    kappa: float | None = None

    @model_validator(mode='before')
    def fill_polytropic_constants(cls, values):  # type: ignore
        if not isinstance(values, dict):
            return values
        values = dict(values)
        kind = values.get("kind", EnergyKind.Polytropic)

        if kind == EnergyKind.Polytropic:
            gamma = values.get("gamma")
            if gamma is None or gamma <= 1:
                raise ValueError("modelo Polytropic exige gamma > 1")
            if values.get("kappa") is None:
                theta = (gamma - 1) / 2
                values["kappa"] = theta**2 / gamma
            if values["kappa"] <= 0:
                raise ValueError("kappa deve ser positivo")
        else:
            if values.get("gamma") is not None or values.get("kappa") is not None:
                raise ValueError(f"gamma/kappa não se aplicam ao modelo {kind}")

        return values

    @property
    def theta(self) -> float:
        if self.kind != EnergyKind.Polytropic:
            raise ValueError("theta só é definido para o modelo Polytropic")
        return (self.gamma - 1) / 2

    @classmethod
    def polytropic(cls, gamma: float, kappa: float | None = None) -> "EnergyModel":
        return cls(kind=EnergyKind.Polytropic, gamma=gamma, kappa=kappa)

    @classmethod
    def isothermal(cls) -> "EnergyModel":
        return cls(kind=EnergyKind.Isothermal)

    @classmethod
    def pressureless(cls) -> "EnergyModel":
        return cls(kind=EnergyKind.Pressureless)
