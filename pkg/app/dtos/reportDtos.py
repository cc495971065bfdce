from pydantic import BaseModel, ConfigDict, Field


class MinimizeStats(BaseModel):
    """Estatísticas de uma minimização por região de confiança."""

    model_config = ConfigDict(frozen=True)

    iterations: int
    rejected_steps: int
    lambda_iterations: int
    value: float
    gradient_norm: float
    final_radius: float
    lambda_history: tuple[float, ...] = ()


class StepRecord(BaseModel):
    step: int
    time: float
    kinetic: float
    internal: float
    total: float
    optimizer_iterations: int = 0


class ErrorReport(BaseModel):
    """Erros contra a solução exata; None quando a medida não se aplica."""

    linf: float | None = Field(None, ge=0)
    l1: float | None = Field(None, ge=0)
    wasserstein: float | None = Field(None, ge=0)
    e_w: float | None = Field(None, ge=0)
    energy_error: float | None = Field(None, ge=0)
    center_error: float | None = Field(None, ge=0)


class RunReport(BaseModel):
    scheme: str
    problem: str
    n: int
    tau: float
    t_start: float
    t_final: float
    steps: list[StepRecord] = []
    snapshots: list[str] = []
    errors: ErrorReport | None = None


class ConvergenceRow(BaseModel):
    """Uma linha da tabela de convergência (um nível da escada)."""

    n: int
    tau: float
    errors: ErrorReport | None = None
    rates: dict[str, float | None] = {}
    status: str = "ok"
