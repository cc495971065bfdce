"""Transporte ótimo em 1D: funções de distribuição inversas, distância de
Wasserstein, transporte por ordenação, redistribuição de massa e projeção
L2 sobre densidades constantes por partes com massas fixas.

Todas as integrais são exatas: sobre a partição de massa comum os
integrandos são polinômios de grau <= 2 em s.
"""

import numpy as np

from app.core.exceptions import DomainError, SingularProjectionError
from app.models.measure import InverseCdf, PiecewiseMeasure
from app.services.optimizer import solve_tridiag_spd
from app.utils.tridiagonal import SymTridiagonal


def inverse_cdf(mu: PiecewiseMeasure) -> InverseCdf:
    return InverseCdf.from_measure(mu)


def _merged_pieces(*inverses: InverseCdf):
    """Sub-intervalos [a, b] de massa positiva da partição comum."""
    nodes = np.unique(np.concatenate([inv.nodes for inv in inverses]))
    a, b = nodes[:-1], nodes[1:]
    keep = b > a
    return a[keep], b[keep]


def _affine_ends(inv: InverseCdf, a: np.ndarray, b: np.ndarray):
    """Valores de F^{-1} nas pontas de cada sub-intervalo, usando o segmento do ponto médio."""
    index = inv.locate(0.5 * (a + b))
    return inv.evaluate_in(a, index), inv.evaluate_in(b, index)


def wasserstein(mu: PiecewiseMeasure, nu: PiecewiseMeasure) -> float:
    """W2(mu, nu) = ||F_mu^{-1} - F_nu^{-1}||_{L2(0,1)}."""
    f, g = inverse_cdf(mu), inverse_cdf(nu)
    a, b = _merged_pieces(f, g)
    fa, fb = _affine_ends(f, a, b)
    ga, gb = _affine_ends(g, a, b)
    da, db = fa - ga, fb - gb
    total = np.sum((b - a) / 3.0 * (da * da + da * db + db * db))
    return float(np.sqrt(max(total, 0.0)))


def sort_with_permutation(y):
    """Ordenação estável: sorted[i] = y[sigma[i]] (índices a partir de 0)."""
    y = np.asarray(y, dtype=float)
    if np.any(np.isnan(y)):
        raise DomainError("posições transportadas contêm NaN")
    sigma = np.argsort(y, kind="stable")
    return y[sigma], sigma


def redistribute_masses(masses, sigma, xhat) -> np.ndarray:
    """Massas m_hat dos intervalos de xhat depois do transporte.

    A massa da célula i (nós i, i+1) é espalhada sobre os intervalos entre
    as posições ordenadas de seus dois nós, proporcionalmente ao comprimento.
    Com a ordenação estável, uma célula que cobre dois ou mais intervalos
    tem comprimento positivo.
    """
    masses = np.asarray(masses, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    n = masses.size

    rank = np.empty_like(sigma)
    rank[sigma] = np.arange(sigma.size)
    k = np.minimum(rank[:-1], rank[1:])
    l = np.maximum(rank[:-1], rank[1:])

    mhat = np.zeros(n)
    simple = (l - k) == 1
    np.add.at(mhat, k[simple], masses[simple])

    for i in np.flatnonzero(~simple):
        lo, hi, mass = k[i], l[i], masses[i]
        shares = mass * np.diff(xhat[lo : hi + 1]) / (xhat[hi] - xhat[lo])
        # o último intervalo recebe o resto, para conservar a massa da célula
        shares[-1] = max(mass - np.sum(shares[:-1]), 0.0)
        mhat[lo:hi] += shares

    return mhat


def mass_matrix(masses) -> SymTridiagonal:
    """A_ij = int phi_i phi_j ds, chapéus sobre os nós de massa s_k."""
    masses = np.asarray(masses, dtype=float)
    diag = np.zeros(masses.size + 1)
    diag[:-1] += masses / 3.0
    diag[1:] += masses / 3.0
    return SymTridiagonal(diag, masses / 6.0)


def m_norm_sq(z, matrix: SymTridiagonal) -> float:
    return matrix.quadratic_form(z)


def project_fixed_masses(nu: PiecewiseMeasure, masses) -> np.ndarray:
    """Nós X que minimizam W(mu_X, nu) entre densidades com as massas dadas.

    X = A^{-1} b com b_k = int phi_k(s) F_nu^{-1}(s) ds. Não impõe monotonia.
    """
    masses = np.asarray(masses, dtype=float)
    if np.any(masses <= 0):
        raise SingularProjectionError("projeção exige todas as massas positivas")

    nodes = PiecewiseMeasure.cumulative(masses)
    target = inverse_cdf(nu)
    hats = InverseCdf(nodes[:-1], nodes[1:], np.zeros(masses.size), np.ones(masses.size))

    a, b = _merged_pieces(hats, target)
    cell = hats.locate(0.5 * (a + b))
    fa, fb = _affine_ends(target, a, b)

    # phi_{cell+1} sobe de 0 a 1 na célula; phi_cell = 1 - phi_{cell+1}
    rise_a = (a - nodes[cell]) / masses[cell]
    rise_b = (b - nodes[cell]) / masses[cell]
    width = (b - a) / 6.0

    def integral(ga, gb):
        return width * (fa * (2.0 * ga + gb) + fb * (ga + 2.0 * gb))

    rhs = np.zeros(masses.size + 1)
    np.add.at(rhs, cell, integral(1.0 - rise_a, 1.0 - rise_b))
    np.add.at(rhs, cell + 1, integral(rise_a, rise_b))
    return solve_tridiag_spd(mass_matrix(masses), rhs)


def transported_measure(knots, velocities, dt: float, masses) -> PiecewiseMeasure:
    """Transporte livre dos nós por dt, ordenação e redistribuição das massas."""
    moved = np.asarray(knots, dtype=float) + dt * np.asarray(velocities, dtype=float)
    xhat, sigma = sort_with_permutation(moved)
    mhat = redistribute_masses(masses, sigma, xhat)
    return PiecewiseMeasure(xhat, mhat)


def transport_project(knots, velocities, dt: float, masses) -> np.ndarray:
    """Transporte, ordenação, redistribuição e projeção sobre as massas originais."""
    return project_fixed_masses(transported_measure(knots, velocities, dt, masses), masses)
