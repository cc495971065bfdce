import math
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.dtos.schemeDtos import SchemeConfig, TrustRegionConfig
from app.enums.exact_kind import ExactKind
from app.enums.initial_data_kind import InitialDataKind
from app.enums.knot_layout import KnotLayout
from app.enums.problem_kind import ProblemKind
from app.enums.scheme_kind import SchemeKind
from app.models.energy_model import EnergyModel

DIFFUSION_PROBLEMS = {ProblemKind.PorousMedium, ProblemKind.Heat}
DIFFUSION_SCHEMES = {SchemeKind.PM1, SchemeKind.PM2}
PARTICLE_SCHEMES = {SchemeKind.VPS1, SchemeKind.PM1}
RIEMANN_DATA = {
    InitialDataKind.ShockShock,
    InitialDataKind.ShockRarefaction,
    InitialDataKind.RarefactionRarefaction,
}
# Perfis exatos que definem o instante inicial t0
SELF_SIMILAR_DATA = {InitialDataKind.Barenblatt, InitialDataKind.HeatKernel}


class InitialDataConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: InitialDataKind
    layout: KnotLayout = KnotLayout.Uniform
    t0: float = Field(1.0, gt=0)
    support: tuple[float, float] = (0.0, 1.0)
    velocity: float = 0.0

    @model_validator(mode='after')
    def validate_support(self):
        if self.support[0] >= self.support[1]:
            raise ValueError("'support' deve ser um intervalo (a, b) com a < b")
        return self


class ExactConfig(BaseModel):
    """Solução de comparação. `Reference` roda o mesmo documento em malha fina."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ExactKind
    reference_n: int | None = Field(None, ge=2)
    reference_tau: float | None = Field(None, gt=0)
    reference_scheme: SchemeKind | None = None
    reference_layout: KnotLayout | None = None

    @model_validator(mode='after')
    def validate_reference(self):
        reference_fields = (self.reference_n, self.reference_tau)
        if self.kind == ExactKind.Reference:
            if None in reference_fields:
                raise ValueError("campos 'reference_n' e 'reference_tau' são obrigatórios para Reference")
            if self.reference_scheme in PARTICLE_SCHEMES:
                raise ValueError("a solução de referência precisa de um esquema de células")
        elif any(v is not None for v in reference_fields):
            raise ValueError(f"campos 'reference_*' não devem ser fornecidos para {self.kind.value}")
        return self


class OutputConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    directory: Path = Path("output")
    snapshot_times: list[float] = []
    precision: int = Field(17, ge=1, le=17)
    write_profiles: bool = True


class RunConfig(BaseModel):
    """Documento de uma simulação (JSON)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    problem: ProblemKind
    scheme: SchemeKind
    alpha: float = Field(2.0 / 3.0, gt=0, le=1)
    gamma: float | None = Field(None, gt=1)
    kappa: float | None = Field(None, gt=0)
    initial_data: InitialDataConfig
    n: int = Field(..., ge=2)
    tau: float = Field(..., gt=0)
    t_final: float = Field(..., gt=0)
    exact: ExactConfig | None = None
    output: OutputConfig = OutputConfig()
    trust_region: TrustRegionConfig = TrustRegionConfig()

    @model_validator(mode='after')
    def validate_scheme_for_problem(self):
        diffusion = self.problem in DIFFUSION_PROBLEMS
        if diffusion and self.scheme not in DIFFUSION_SCHEMES:
            raise ValueError(f"o problema {self.problem.value} exige PM1 ou PM2, não {self.scheme.value}")
        if not diffusion and self.scheme in DIFFUSION_SCHEMES:
            raise ValueError(f"o esquema {self.scheme.value} só vale para meios porosos / calor")
        return self

    @model_validator(mode='after')
    def validate_energy_parameters(self):
        polytropic = self.problem in (ProblemKind.PorousMedium, ProblemKind.IsentropicEuler)
        if polytropic and self.gamma is None:
            raise ValueError(f"campo 'gamma' é obrigatório para {self.problem.value}")
        if not polytropic and (self.gamma is not None or self.kappa is not None):
            raise ValueError(f"campos 'gamma'/'kappa' não se aplicam a {self.problem.value}")
        return self

    @model_validator(mode='after')
    def validate_times(self):
        duration = self.t_final - self.t_start
        if duration <= 0:
            raise ValueError("t_final deve ser maior que o instante inicial")
        steps = duration / self.tau
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ValueError("t_final - t_inicial deve ser múltiplo de tau")
        for t in self.output.snapshot_times:
            if not self.t_start <= t <= self.t_final:
                raise ValueError(f"instante de snapshot {t} fora de [{self.t_start}, {self.t_final}]")
        return self

    @model_validator(mode='after')
    def validate_exact(self):
        if self.exact is None:
            return self
        kind = self.exact.kind
        if kind == ExactKind.Barenblatt and self.problem != ProblemKind.PorousMedium:
            raise ValueError("Barenblatt só é solução exata do meio poroso")
        if kind == ExactKind.HeatKernel and self.problem != ProblemKind.Heat:
            raise ValueError("o núcleo do calor só é solução exata da equação do calor")
        if kind == ExactKind.Riemann:
            if self.problem != ProblemKind.IsentropicEuler:
                raise ValueError("soluções de Riemann exigem IsentropicEuler")
            if self.initial_data.kind not in RIEMANN_DATA:
                raise ValueError("soluções de Riemann exigem dados iniciais de Riemann")
            if self.kappa is not None:
                raise ValueError("soluções de Riemann usam kappa = theta^2/gamma; não informe 'kappa'")
        return self

    @property
    def t_start(self) -> float:
        if self.initial_data.kind in SELF_SIMILAR_DATA:
            return self.initial_data.t0
        return 0.0

    @property
    def n_steps(self) -> int:
        return int(round((self.t_final - self.t_start) / self.tau))

    @property
    def uses_particles(self) -> bool:
        return self.scheme in PARTICLE_SCHEMES

    def energy_model(self) -> EnergyModel:
        if self.problem == ProblemKind.PorousMedium:
            return EnergyModel.polytropic(self.gamma, 1.0 if self.kappa is None else self.kappa)
        if self.problem == ProblemKind.IsentropicEuler:
            return EnergyModel.polytropic(self.gamma, self.kappa)
        return EnergyModel.isothermal()

    def scheme_config(self) -> SchemeConfig:
        return SchemeConfig(
            scheme=self.scheme,
            tau=self.tau,
            model=self.energy_model(),
            alpha=self.alpha,
            trust_region=self.trust_region,
        )

    def with_level(self, n: int, tau: float, **changes) -> "RunConfig":
        """Cópia revalidada com outra resolução (e outras trocas opcionais)."""
        data = self.model_dump(exclude={"ladder"})
        data.update(n=n, tau=tau, **changes)
        return RunConfig.model_validate(data)


class LadderLevel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2)
    tau: float = Field(..., gt=0)


class ConvergeConfig(RunConfig):
    """Modelo de simulação mais a escada de resoluções (N, tau)."""

    ladder: list[LadderLevel] = Field(..., min_length=2)

    @model_validator(mode='before')
    def default_resolution_from_ladder(cls, values):  # type: ignore
        if isinstance(values, dict) and values.get("ladder"):
            first = values["ladder"][0]
            first = first.model_dump() if isinstance(first, LadderLevel) else first
            values = {**values}
            values.setdefault("n", first.get("n"))
            values.setdefault("tau", first.get("tau"))
        return values

    @model_validator(mode='after')
    def validate_ladder_order(self):
        for coarse, fine in zip(self.ladder, self.ladder[1:]):
            if fine.n <= coarse.n or fine.tau > coarse.tau:
                raise ValueError("a escada deve estar ordenada por refinamento (N crescente, tau não crescente)")
        for level in self.ladder:
            steps = (self.t_final - self.t_start) / level.tau
            if not math.isclose(steps, round(steps), rel_tol=1e-9):
                raise ValueError(f"t_final - t_inicial deve ser múltiplo de tau = {level.tau}")
        return self
