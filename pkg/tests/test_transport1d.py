from itertools import permutations

import numpy as np
import pytest

from app.core.exceptions import DomainError, SingularProjectionError
from app.models.measure import PiecewiseMeasure
from app.services.transport1d import (
    inverse_cdf,
    m_norm_sq,
    mass_matrix,
    project_fixed_masses,
    redistribute_masses,
    sort_with_permutation,
    transport_project,
    transported_measure,
    wasserstein,
)


def _brute_force_w2(x, y):
    """Melhor pareamento entre duas nuvens de mesma massa, por força bruta."""
    n = len(x)
    best = min(np.sum((x - y[list(p)]) ** 2) for p in permutations(range(n)))
    return np.sqrt(best / n)


# ============================================================================
# Wasserstein
# ============================================================================

def test_wasserstein_matches_brute_force_assignment(rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        x = rng.normal(size=n)
        y = rng.normal(size=n)
        weights = np.full(n, 1.0 / n)

        mu = PiecewiseMeasure.from_atoms(x, weights)
        nu = PiecewiseMeasure.from_atoms(y, weights)

        assert wasserstein(mu, nu) == pytest.approx(_brute_force_w2(x, y), abs=1e-12)


def test_wasserstein_of_translated_uniform():
    mu = PiecewiseMeasure(np.array([0.0, 1.0]), np.array([1.0]))
    nu = PiecewiseMeasure(np.array([0.3, 1.3]), np.array([1.0]))

    assert wasserstein(mu, nu) == pytest.approx(0.3, abs=1e-15)


def test_wasserstein_uniform_against_point_mass():
    """W2(U[0,1], delta_{1/2})^2 = 1/12."""
    mu = PiecewiseMeasure(np.array([0.0, 1.0]), np.array([1.0]))
    nu = PiecewiseMeasure.from_atoms([0.5], [1.0])

    assert wasserstein(mu, nu) == pytest.approx(np.sqrt(1.0 / 12.0), rel=1e-14)


def test_wasserstein_is_symmetric_and_zero_on_diagonal(rng):
    knots = np.sort(rng.normal(size=6))
    masses = rng.random(5)
    mu = PiecewiseMeasure(knots, masses / masses.sum())
    nu = PiecewiseMeasure.from_atoms(rng.normal(size=4), np.full(4, 0.25))

    assert wasserstein(mu, mu) == pytest.approx(0.0, abs=1e-14)
    assert wasserstein(mu, nu) == pytest.approx(wasserstein(nu, mu), rel=1e-13)


def test_inverse_cdf_of_cells():
    mu = PiecewiseMeasure(np.array([0.0, 1.0, 3.0]), np.array([0.5, 0.5]))
    f = inverse_cdf(mu)

    assert f(0.25) == pytest.approx(0.5)
    assert f(0.75) == pytest.approx(2.0)


# ============================================================================
# Ordenação e redistribuição
# ============================================================================

def test_sort_is_stable():
    values, sigma = sort_with_permutation([2.0, 1.0, 2.0, 0.0])

    np.testing.assert_array_equal(values, [0.0, 1.0, 2.0, 2.0])
    np.testing.assert_array_equal(sigma, [3, 1, 0, 2])


def test_sort_rejects_nan():
    with pytest.raises(DomainError):
        sort_with_permutation([0.0, np.nan])


def test_redistribute_without_crossing_keeps_masses():
    masses = np.array([0.2, 0.3, 0.5])
    xhat, sigma = sort_with_permutation([0.0, 1.0, 2.0, 3.0])

    np.testing.assert_allclose(redistribute_masses(masses, sigma, xhat), masses)


def test_redistribute_after_crossing():
    """Os nós 1 e 2 trocam de lugar: células vizinhas espalham sua massa."""
    masses = np.array([0.2, 0.3, 0.5])
    xhat, sigma = sort_with_permutation([0.0, 2.5, 1.5, 3.0])

    mhat = redistribute_masses(masses, sigma, xhat)

    np.testing.assert_allclose(mhat, [0.12, 0.08 + 0.3 + 0.5 * 2 / 3, 0.5 / 3], rtol=1e-13)
    assert mhat.sum() == pytest.approx(1.0, abs=1e-15)


def test_redistribute_onto_collapsed_interval():
    """O último nó alcança o primeiro: o intervalo de largura zero não recebe massa."""
    masses = np.array([0.4, 0.6])
    xhat, sigma = sort_with_permutation([0.0, 1.0, 0.0])

    mhat = redistribute_masses(masses, sigma, xhat)

    np.testing.assert_allclose(mhat, [0.0, 1.0], atol=1e-15)


# ============================================================================
# Matriz de massa e projeção
# ============================================================================

def test_mass_matrix_entries():
    matrix = mass_matrix(np.array([0.5, 0.5]))

    np.testing.assert_allclose(matrix.diag, [1 / 6, 1 / 3, 1 / 6])
    np.testing.assert_allclose(matrix.off, [1 / 12, 1 / 12])


def test_mass_norm_of_constant_vector_is_one():
    """||1||_m^2 = int_0^1 1 ds."""
    matrix = mass_matrix(np.array([0.1, 0.2, 0.3, 0.4]))

    assert m_norm_sq(np.ones(5), matrix) == pytest.approx(1.0, rel=1e-14)


def test_projection_of_uniform_measure():
    nu = PiecewiseMeasure(np.array([0.0, 2.0]), np.array([1.0]))

    knots = project_fixed_masses(nu, np.array([0.5, 0.5]))

    np.testing.assert_allclose(knots, [0.0, 1.0, 2.0], atol=1e-14)


def test_projection_reproduces_representable_measure(rng):
    masses = rng.random(6)
    masses /= masses.sum()
    knots = np.cumsum(rng.random(7))

    projected = project_fixed_masses(PiecewiseMeasure(knots, masses), masses)

    np.testing.assert_allclose(projected, knots, atol=1e-12)


def test_projection_minimizes_wasserstein(rng):
    masses = np.full(3, 1.0 / 3.0)
    nu = PiecewiseMeasure(np.array([0.0, 0.1, 2.0]), np.array([0.7, 0.3]))

    best = project_fixed_masses(nu, masses)
    value = wasserstein(PiecewiseMeasure(best, masses), nu)

    for _ in range(20):
        trial = np.sort(best + 1e-3 * rng.normal(size=4))
        assert wasserstein(PiecewiseMeasure(trial, masses), nu) >= value - 1e-15


def test_projection_with_zero_mass_is_singular():
    nu = PiecewiseMeasure(np.array([0.0, 1.0]), np.array([1.0]))

    with pytest.raises(SingularProjectionError):
        project_fixed_masses(nu, np.array([0.5, 0.0, 0.5]))


def test_transport_project_without_velocity_is_identity(uniform_cells):
    knots = transport_project(uniform_cells.knots, uniform_cells.velocities, 0.1, uniform_cells.masses)

    np.testing.assert_allclose(knots, uniform_cells.knots, atol=1e-14)


def test_transport_project_translates_rigidly(uniform_cells):
    velocities = np.full(5, 2.0)

    knots = transport_project(uniform_cells.knots, velocities, 0.1, uniform_cells.masses)

    np.testing.assert_allclose(knots, uniform_cells.knots + 0.2, atol=1e-14)


def test_transported_measure_conserves_mass():
    masses = np.array([0.25, 0.25, 0.5])
    measure = transported_measure(np.array([0.0, 1.0, 2.0, 3.0]), np.array([0.0, 3.0, -3.0, 0.0]), 0.5, masses)

    assert measure.masses.sum() == pytest.approx(1.0, abs=1e-15)
    assert np.all(np.diff(measure.breakpoints) >= 0)
