import numpy as np
import pytest

from app.models.cell_state import CellState
from app.models.energy_model import EnergyModel
from app.models.particle_state import ParticleState
from app.services.metrics import (
    center_error,
    convergence_rates,
    energy_error,
    evaluate_errors,
    ew_error,
    l1_error,
    linf_error,
    wasserstein_error,
)
from app.services.oracles import BarenblattSolution, ExactSolution, ReferenceSolution


class TriangleSolution(ExactSolution):
    """rho = 1 - |x| em [-1, 1], velocidade u = x."""

    def density(self, t, x):
        return np.maximum(1.0 - np.abs(np.asarray(x, dtype=float)), 0.0)

    def velocity(self, t, x):
        return np.asarray(x, dtype=float)

    def cdf(self, t, x):
        x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
        return np.where(x < 0, 0.5 * (1.0 + x) ** 2, 1.0 - 0.5 * (1.0 - x) ** 2)

    def quantile(self, t, s):
        s = np.asarray(s, dtype=float)
        return np.where(s < 0.5, np.sqrt(2.0 * s) - 1.0, 1.0 - np.sqrt(2.0 * (1.0 - s)))

    def breakpoints(self, t):
        return np.array([-1.0, 0.0, 1.0])


@pytest.fixture
def triangle_cells():
    """Quatro células em [-1, 1] com as massas exatas do triângulo."""
    knots = np.linspace(-1.0, 1.0, 5)
    masses = np.diff(TriangleSolution().cdf(0.0, knots))
    return CellState(knots, masses, knots.copy(), 1.0)


# ============================================================================
# Ordens de convergência
# ============================================================================

def test_convergence_rates():
    h = [1.0 / n for n in (10, 20, 40, 80)]
    errors = [0.1, 0.1 * 2**-1.04, 0.1 * 2**-(1.04 + 1.37), None]

    rates = convergence_rates(errors, h)

    assert rates[0] == pytest.approx(1.04)
    assert rates[1] == pytest.approx(1.37)
    assert rates[2] is None


def test_convergence_rate_undefined_for_zero_error():
    assert convergence_rates([0.0, 0.1], [0.1, 0.05]) == [None]


# ============================================================================
# Erros de densidade
# ============================================================================

def test_density_errors_at_midpoints(triangle_cells):
    exact = TriangleSolution()
    # densidade média em [-1, -0.5] é 0.25; o valor exato no ponto médio é 0.25
    expected = np.abs(triangle_cells.densities - exact.density(1.0, triangle_cells.midpoints))

    assert linf_error(triangle_cells, exact, 1.0) == pytest.approx(np.max(expected))
    assert l1_error(triangle_cells, exact, 1.0) == pytest.approx(np.sum(0.5 * expected))


def test_center_error_vanishes_for_exact_cell_masses(triangle_cells):
    """Massas exatas: a média discreta coincide com a média exata, sem viés do pico."""
    assert center_error(triangle_cells, TriangleSolution(), 1.0) == pytest.approx(0.0, abs=1e-14)


def test_center_error_averages_cells_at_a_knot():
    """x = 0 é nó: massa 0.5 em [-0.5, 0.5] contra a massa exata 0.75."""
    state = CellState(np.linspace(-1.0, 1.0, 5), np.full(4, 0.25), np.zeros(5))

    assert center_error(state, TriangleSolution(), 1.0) == pytest.approx(0.25)


def test_center_error_inside_a_cell():
    exact = TriangleSolution()
    knots = np.array([-1.0, -0.2, 0.3, 1.0])
    state = CellState(knots, np.full(3, 1.0 / 3.0), np.zeros(4))
    exact_average = (exact.cdf(0.0, 0.3) - exact.cdf(0.0, -0.2)) / 0.5

    assert center_error(state, exact, 1.0) == pytest.approx(abs(2.0 / 3.0 - exact_average))


def test_center_error_for_particles():
    state = ParticleState(np.array([-0.5, 0.5]), np.zeros(2), 0.5)

    assert center_error(state, TriangleSolution(), 1.0) == pytest.approx(0.25)


# ============================================================================
# Wasserstein e E_W
# ============================================================================

def test_errors_vanish_against_own_reference():
    state = CellState(np.array([-1.0, 0.0, 0.5, 2.0]), np.array([0.2, 0.5, 0.3]), np.array([0.0, 1.0, -1.0, 0.5]), 0.7)
    reference = ReferenceSolution(state)

    assert wasserstein_error(state, reference, 0.7) == pytest.approx(0.0, abs=1e-14)
    assert ew_error(state, reference, 0.7) == pytest.approx(0.0, abs=1e-12)
    assert linf_error(state, reference, 0.7) == pytest.approx(0.0, abs=1e-14)


def test_wasserstein_error_decreases_with_resolution():
    exact = BarenblattSolution(2.0)
    coarse = CellState(np.linspace(-1.0, 1.0, 5), np.full(4, 0.25), np.zeros(5), 1.0)

    w = wasserstein_error(coarse, exact, 1.0, resolution=2000)

    assert 0.0 < w < 1.0
    assert w == pytest.approx(wasserstein_error(coarse, exact, 1.0, resolution=4000), rel=1e-3)


def test_ew_error_includes_velocity_mismatch(triangle_cells):
    exact = TriangleSolution()
    still = CellState(triangle_cells.knots, triangle_cells.masses, np.zeros(5), 1.0)

    assert ew_error(still, exact, 1.0, resolution=4000) > ew_error(triangle_cells, exact, 1.0, resolution=4000)


# ============================================================================
# Energia e relatório
# ============================================================================

def test_energy_error_against_reference(uniform_cells, polytropic):
    reference = ReferenceSolution(uniform_cells)

    assert energy_error(uniform_cells, reference, polytropic, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_evaluate_errors_fills_applicable_fields(triangle_cells):
    report = evaluate_errors(triangle_cells, TriangleSolution(), 1.0, resolution=1000)

    assert report.linf is not None and report.e_w is not None
    assert report.energy_error is None


def test_evaluate_errors_for_particles_skips_ew():
    state = ParticleState(np.array([-0.5, 0.0, 0.5]), np.zeros(3), 1.0 / 3.0)
    model = EnergyModel.polytropic(2.0)

    report = evaluate_errors(state, TriangleSolution(), 1.0, model=model, include_energy=True, resolution=1000)

    assert report.e_w is None
    assert report.energy_error is not None
