from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.enums.scheme_kind import SchemeKind
from app.models.energy_model import EnergyModel


class TrustRegionConfig(BaseModel):
    """Parâmetros do método de região de confiança."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    delta0: float = Field(0.5, gt=0)
    delta_max: float = Field(1.0, gt=0, le=1.0)
    grad_tol: float = Field(1e-10, gt=0)
    max_iters: int = Field(200, ge=1)
    eta: float = Field(1e-4, ge=0, lt=0.25)
    max_lambda_iters: int = Field(50, ge=1)

    @model_validator(mode='after')
    def validate_radius(self):
        if self.delta0 > self.delta_max:
            raise ValueError("delta0 não pode exceder delta_max")
        return self


class SchemeConfig(BaseModel):
    """Esquema, passo de tempo e lei de energia de uma simulação."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scheme: SchemeKind
    tau: float = Field(..., gt=0)
    model: EnergyModel
    alpha: float = Field(2.0 / 3.0, gt=0, le=1)
    trust_region: TrustRegionConfig = TrustRegionConfig()
