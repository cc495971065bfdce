import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ConfigError, SolverStepError, VpsError
from app.dtos.reportDtos import ConvergenceRow, ErrorReport, RunReport, StepRecord
from app.dtos.runDtos import ConvergeConfig, RunConfig
from app.enums.exact_kind import ExactKind
from app.enums.initial_data_kind import InitialDataKind
from app.enums.problem_kind import ProblemKind
from app.models.cell_state import CellState
from app.models.particle_state import ParticleState
from app.services.initial_data import cells, equal_mass_particles, profile_for, riemann_data_for
from app.services.metrics import convergence_rates, evaluate_errors
from app.services.oracles import (
    BarenblattSolution,
    ExactSolution,
    HeatKernelSolution,
    ReferenceSolution,
    RiemannExact,
)
from app.services.physics import total_energy
from app.services.schemes import make_stepper
from app.utils.csv_writer import write_table

logger = logging.getLogger(__name__)

EULER_PROBLEMS = {ProblemKind.IsentropicEuler, ProblemKind.IsothermalEuler}
ERROR_FIELDS = ("center_error", "linf", "l1", "wasserstein", "e_w", "energy_error")
RATE_COLUMNS = {
    "center_error": "center_rate",
    "linf": "linf_rate",
    "l1": "l1_rate",
    "wasserstein": "wasserstein_rate",
    "e_w": "e_w_rate",
    "energy_error": "energy_rate",
}
EXACT_PROFILES = {
    "barenblatt": None,
    "heat": None,
    "shock-shock": InitialDataKind.ShockShock,
    "shock-rarefaction": InitialDataKind.ShockRarefaction,
    "rarefaction-rarefaction": InitialDataKind.RarefactionRarefaction,
}
# Massa desprezada nas caudas ao tabelar perfis de suporte ilimitado
EXACT_TAIL_MASS = 1e-9


@dataclass
class Trajectory:
    final: ParticleState | CellState
    steps: list[StepRecord] = field(default_factory=list)
    snapshots: dict[int, ParticleState | CellState] = field(default_factory=dict)


# ============================================================================
# Montagem
# ============================================================================

def build_initial_state(config: RunConfig) -> ParticleState | CellState:
    data = config.initial_data
    profile = profile_for(
        data.kind,
        gamma=config.gamma,
        kappa=config.kappa,
        t0=data.t0,
        support=data.support,
        velocity=data.velocity,
    )
    if config.uses_particles:
        return equal_mass_particles(profile, config.n)
    return cells(profile, config.n, data.layout)


def build_exact(config: RunConfig) -> ExactSolution | None:
    """Solução analítica do documento; Reference é montada à parte (precisa simular)."""
    if config.exact is None:
        return None
    kind = config.exact.kind
    if kind == ExactKind.Barenblatt:
        return BarenblattSolution(config.gamma, config.energy_model().kappa)
    if kind == ExactKind.HeatKernel:
        return HeatKernelSolution()
    if kind == ExactKind.Riemann:
        return RiemannExact(riemann_data_for(config.initial_data.kind, config.gamma))
    return None


def reference_config(config: RunConfig) -> RunConfig:
    exact = config.exact
    initial_data = config.initial_data
    if exact.reference_layout is not None:
        initial_data = initial_data.model_copy(update={"layout": exact.reference_layout})
    return config.with_level(
        exact.reference_n,
        exact.reference_tau,
        scheme=exact.reference_scheme or config.scheme,
        initial_data=initial_data,
        exact=None,
        output=config.output.model_copy(update={"snapshot_times": []}),
    )


def snapshot_steps(config: RunConfig) -> list[int]:
    steps = {int(round((t - config.t_start) / config.tau)) for t in config.output.snapshot_times}
    steps.add(config.n_steps)
    return sorted(steps)


def simulate(config: RunConfig, snapshots: list[int] | None = None) -> Trajectory:
    """Integra do instante inicial até t_final; t^n = t0 + n tau."""
    model = config.energy_model()
    stepper = make_stepper(config.scheme_config())
    state = build_initial_state(config)
    wanted = set(snapshots or [])

    def record(step: int, current, iterations: int = 0) -> StepRecord:
        energy = total_energy(current, model)
        return StepRecord(
            step=step,
            time=current.time,
            kinetic=energy.kinetic,
            internal=energy.internal,
            total=energy.total,
            optimizer_iterations=iterations,
        )

    trajectory = Trajectory(final=state, steps=[record(0, state)])
    if 0 in wanted:
        trajectory.snapshots[0] = state

    n_steps = config.n_steps
    report_every = max(n_steps // 10, 1)
    for n in range(1, n_steps + 1):
        stats = []
        try:
            state = stepper.step(state, stats, time=config.t_start + n * config.tau)
        except (VpsError, ValueError, ArithmeticError) as exc:
            raise SolverStepError(str(exc), n) from exc

        trajectory.steps.append(record(n, state, sum(s.iterations for s in stats)))
        if n in wanted:
            trajectory.snapshots[n] = state
        if n % report_every == 0:
            logger.info("%s N=%d: passo %d/%d (t=%.4g)", config.scheme.value, config.n, n, n_steps, state.time)

    trajectory.final = state
    return trajectory


def compute_errors(config: RunConfig, state, exact: ExactSolution | None) -> ErrorReport | None:
    if exact is None:
        return None
    return evaluate_errors(
        state,
        exact,
        config.t_final,
        model=config.energy_model(),
        include_energy=config.problem in EULER_PROBLEMS,
        resolution=settings.EXACT_RESOLUTION,
    )


def run_level(config: RunConfig, reference: ExactSolution | None = None) -> ConvergenceRow:
    """Um nível da escada; falhas viram status, não exceções."""
    try:
        exact = reference if reference is not None else build_exact(config)
        trajectory = simulate(config)
        errors = compute_errors(config, trajectory.final, exact)
    except VpsError as exc:
        logger.warning("nível N=%d, tau=%g falhou: %s", config.n, config.tau, exc)
        return ConvergenceRow(n=config.n, tau=config.tau, status=f"failed: {exc}")
    return ConvergenceRow(n=config.n, tau=config.tau, errors=errors)


# ============================================================================
# Serviço
# ============================================================================

class ExperimentService:
    """Executa simulações, estudos de convergência e tabelas de soluções exatas."""

    def __init__(self, workers: int | None = None, output_dir: Path | None = None):
        self.workers = workers or settings.WORKERS
        self.output_dir = output_dir

    def _directory(self, configured: Path) -> Path:
        directory = self.output_dir or settings.OUTPUT_DIR or configured
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    @staticmethod
    def load_config(path: Path, model: type[RunConfig] = RunConfig) -> RunConfig:
        """Lê um documento JSON; qualquer problema vira ConfigError."""
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"não foi possível ler {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"JSON inválido em {path}: {exc}") from exc
        try:
            return model.model_validate(document)
        except ValidationError as exc:
            raise ConfigError(f"documento inválido {path}:\n{exc}") from exc

    def reference(self, config: RunConfig) -> ReferenceSolution:
        fine = reference_config(config)
        logger.info("rodando referência %s N=%d, tau=%g", fine.scheme.value, fine.n, fine.tau)
        return ReferenceSolution(simulate(fine).final)

    def exact_for(self, config: RunConfig) -> ExactSolution | None:
        if config.exact is not None and config.exact.kind == ExactKind.Reference:
            return self.reference(config)
        return build_exact(config)

    def run(self, config: RunConfig) -> RunReport:
        """Simula e grava perfis, energia e report.json."""
        directory = self._directory(config.output.directory)
        precision = config.output.precision

        trajectory = simulate(config, snapshot_steps(config))
        errors = compute_errors(config, trajectory.final, self.exact_for(config))

        names = []
        if config.output.write_profiles:
            for step, state in sorted(trajectory.snapshots.items()):
                name = f"profile_{step:06d}.csv"
                write_table(
                    directory / name,
                    {
                        "x_mid": state.midpoints,
                        "density": state.densities,
                        "velocity": state.interval_velocities,
                    },
                    precision,
                )
                names.append(name)

        write_table(
            directory / "energy.csv",
            {
                "step": [r.step for r in trajectory.steps],
                "t": [r.time for r in trajectory.steps],
                "kinetic": [r.kinetic for r in trajectory.steps],
                "internal": [r.internal for r in trajectory.steps],
                "total": [r.total for r in trajectory.steps],
            },
            precision,
        )

        report = RunReport(
            scheme=config.scheme.value,
            problem=config.problem.value,
            n=config.n,
            tau=config.tau,
            t_start=config.t_start,
            t_final=config.t_final,
            steps=trajectory.steps,
            snapshots=names,
            errors=errors,
        )
        (directory / "report.json").write_text(report.model_dump_json(indent=2), encoding="utf-8")
        logger.info("execução concluída em %s", directory)
        return report

    def converge(self, config: ConvergeConfig) -> list[ConvergenceRow]:
        """Roda a escada (N, tau) e grava convergence.csv com as ordens observadas."""
        directory = self._directory(config.output.directory)
        no_snapshots = config.output.model_copy(update={"snapshot_times": []})
        levels = [config.with_level(level.n, level.tau, output=no_snapshots) for level in config.ladder]

        reference = None
        if config.exact is not None and config.exact.kind == ExactKind.Reference:
            reference = self.reference(config)

        if self.workers > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(run_level, levels, [reference] * len(levels)))
        else:
            rows = [run_level(level, reference) for level in levels]

        rows = self._with_rates(rows)
        self._write_convergence(directory / "convergence.csv", rows, config.output.precision)
        return rows

    @staticmethod
    def _with_rates(rows: list[ConvergenceRow]) -> list[ConvergenceRow]:
        # resolução h = m = 1/N
        resolutions = [1.0 / row.n for row in rows]
        rates_by_field = {}
        for name in ERROR_FIELDS:
            errors = [getattr(row.errors, name) if row.errors else None for row in rows]
            rates_by_field[name] = [None] + convergence_rates(errors, resolutions)
        return [
            row.model_copy(update={"rates": {name: rates_by_field[name][k] for name in ERROR_FIELDS}})
            for k, row in enumerate(rows)
        ]

    @staticmethod
    def _write_convergence(path: Path, rows: list[ConvergenceRow], precision: int) -> None:
        columns: dict[str, list] = {"n": [row.n for row in rows], "tau": [row.tau for row in rows]}
        for name in ERROR_FIELDS:
            columns[name] = [getattr(row.errors, name) if row.errors else None for row in rows]
            columns[RATE_COLUMNS[name]] = [row.rates.get(name) for row in rows]
        columns["status"] = [row.status for row in rows]
        write_table(path, columns, precision)
        logger.info("tabela de convergência gravada em %s", path)

    def exact(
        self,
        profile: str,
        t: float,
        grid: int,
        gamma: float = 5.0 / 3.0,
        output_dir: Path = Path("output"),
        precision: int = 17,
    ) -> Path:
        """Tabela (x, density, velocity) de um perfil exato em `grid` pontos uniformes."""
        if profile not in EXACT_PROFILES:
            raise ConfigError(f"perfil desconhecido '{profile}'; opções: {', '.join(EXACT_PROFILES)}")
        if grid < 2:
            raise ConfigError("a malha precisa de pelo menos 2 pontos")

        if profile == "barenblatt":
            solution: ExactSolution = BarenblattSolution(gamma)
        elif profile == "heat":
            solution = HeatKernelSolution()
        else:
            solution = RiemannExact(riemann_data_for(EXACT_PROFILES[profile], gamma))

        points = solution.breakpoints(t)
        lo, hi = float(points[0]), float(points[-1])
        if not (np.isfinite(lo) and np.isfinite(hi)):
            lo, hi = solution.quantile(t, [EXACT_TAIL_MASS, 1.0 - EXACT_TAIL_MASS])
        x = np.linspace(lo, hi, grid)

        path = self._directory(output_dir) / f"exact_{profile}.csv"
        write_table(
            path,
            {"x": x, "density": solution.density(t, x), "velocity": solution.velocity(t, x)},
            precision,
        )
        return path


experiment_service = ExperimentService()
