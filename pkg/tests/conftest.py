import sys
from pathlib import Path

import factory
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from app.core.config import settings
from app.dtos.runDtos import InitialDataConfig, OutputConfig, RunConfig
from app.enums.initial_data_kind import InitialDataKind
from app.enums.knot_layout import KnotLayout
from app.enums.problem_kind import ProblemKind
from app.enums.scheme_kind import SchemeKind
from app.models.cell_state import CellState
from app.models.energy_model import EnergyModel
from app.models.particle_state import ParticleState


# ============================================================================
# Factories de documentos
# ============================================================================

class InitialDataConfigFactory(factory.Factory):
    class Meta:
        model = InitialDataConfig

    kind = InitialDataKind.Uniform
    layout = KnotLayout.Uniform
    support = (-1.0, 1.0)
    velocity = 0.0


class RunConfigFactory(factory.Factory):
    """Execução curta de Euler isentrópico com VPS2."""

    class Meta:
        model = RunConfig

    problem = ProblemKind.IsentropicEuler
    scheme = SchemeKind.VPS2
    gamma = 5.0 / 3.0
    initial_data = factory.SubFactory(InitialDataConfigFactory)
    n = 10
    tau = 0.01
    t_final = 0.05
    output = factory.LazyFunction(lambda: OutputConfig(snapshot_times=[0.05]))


# ============================================================================
# Fixtures de modelos e estados
# ============================================================================

@pytest.fixture
def polytropic():
    """Lei gamma = 5/3 com a normalização kappa = theta^2 / gamma."""
    return EnergyModel.polytropic(5.0 / 3.0)


@pytest.fixture
def isothermal():
    return EnergyModel.isothermal()


@pytest.fixture
def pressureless():
    return EnergyModel.pressureless()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def uniform_cells():
    """Quatro células de massa 1/4 em [0, 1], em repouso."""
    return CellState(np.linspace(0.0, 1.0, 5), np.full(4, 0.25), np.zeros(5))


@pytest.fixture
def uniform_particles():
    positions = (np.arange(1, 5) - 0.5) / 4
    return ParticleState(positions, np.zeros(4), 0.25)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Redireciona toda a saída de experimentos para um diretório temporário."""
    monkeypatch.setattr(settings, "OUTPUT_DIR", tmp_path)
    return tmp_path


@pytest.fixture
def run_config_factory():
    return RunConfigFactory
