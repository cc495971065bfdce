"""Newton com região de confiança para objetivos convexos com Hessiana tridiagonal."""

import logging
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from scipy.linalg import LinAlgError, cho_solve_banded, cholesky_banded, solve_banded, solveh_banded

from app.core.exceptions import ConvergenceError, InfiniteEnergyError, NotPositiveDefiniteError
from app.dtos.reportDtos import MinimizeStats
from app.dtos.schemeDtos import TrustRegionConfig
from app.utils.tridiagonal import SymTridiagonal

logger = logging.getLogger(__name__)

# Passo interno de Newton cuja redução real cai no nível de arredondamento
ROUNDOFF_TOL = 1e-14
SUBPROBLEM_TOL = 1e-12


class Objective(Protocol):
    def evaluate(self, z: np.ndarray) -> tuple[float, np.ndarray, SymTridiagonal]:
        """Valor, gradiente e Hessiana tridiagonal.

        Deve levantar InfiniteEnergyError quando z não for estritamente crescente.
        """
        ...


@dataclass(frozen=True)
class BidiagonalFactor:
    """Fator L bidiagonal inferior de L L^T = H + lambda I."""

    diag: np.ndarray
    sub: np.ndarray

    def upper_banded(self) -> np.ndarray:
        banded = np.zeros((2, self.diag.size))
        banded[0, 1:] = self.sub
        banded[1, :] = self.diag
        return banded

    def lower_banded(self) -> np.ndarray:
        banded = np.zeros((2, self.diag.size))
        banded[0, :] = self.diag
        banded[1, :-1] = self.sub
        return banded

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Resolve L L^T x = rhs."""
        return cho_solve_banded((self.upper_banded(), False), rhs)

    def solve_lower(self, rhs: np.ndarray) -> np.ndarray:
        """Resolve L q = rhs."""
        return solve_banded((1, 0), self.lower_banded(), rhs)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1)


@dataclass(frozen=True)
class SubproblemResult:
    step: np.ndarray
    lam: float
    iterations: int


def cholesky_tridiag(diag, offdiag, lam: float = 0.0) -> BidiagonalFactor:
    matrix = SymTridiagonal(diag, offdiag).shifted(lam)
    try:
        upper = cholesky_banded(matrix.upper_banded(), lower=False)
    except (LinAlgError, ValueError) as exc:
        raise NotPositiveDefiniteError(f"H + lambda I não é positiva definida: {exc}") from exc
    return BidiagonalFactor(diag=upper[1].copy(), sub=upper[0, 1:].copy())


def solve_tridiag_spd(matrix: SymTridiagonal, rhs) -> np.ndarray:
    rhs = np.asarray(rhs, dtype=float)
    try:
        return solveh_banded(matrix.upper_banded(), rhs)
    except (LinAlgError, ValueError) as exc:
        raise NotPositiveDefiniteError(f"sistema tridiagonal não é SPD: {exc}") from exc


def solve_subproblem(
    g_hat,
    h_hat: SymTridiagonal,
    delta: float,
    lambda0: float = 0.0,
    max_iters: int = 50,
) -> SubproblemResult:
    """Minimiza g^T p + p^T H p / 2 com ||p|| <= delta (H positiva definida).

    Newton em lambda para 1/delta - 1/||p(lambda)||.
    """
    g = np.asarray(g_hat, dtype=float)
    if not np.any(g):
        return SubproblemResult(np.zeros_like(g), 0.0, 0)

    lam = max(float(lambda0), 0.0)
    for k in range(1, max_iters + 1):
        factor = cholesky_tridiag(h_hat.diag, h_hat.off, lam)
        p = factor.solve(-g)
        q = factor.solve_lower(p)
        p_norm = np.linalg.norm(p)
        q_norm = np.linalg.norm(q)

        lam_next = lam + (p_norm / q_norm) ** 2 * (p_norm - delta) / delta
        if lam == 0.0 and lam_next <= 0.0:
            return SubproblemResult(p, 0.0, k)
        if abs(p_norm - delta) / delta < SUBPROBLEM_TOL:
            lam_next = max(lam_next, 0.0)
            p = cholesky_tridiag(h_hat.diag, h_hat.off, lam_next).solve(-g)
            return SubproblemResult(p, lam_next, k)
        lam = max(lam_next, 0.0)

    raise ConvergenceError(f"iteração em lambda não convergiu em {max_iters} passos", iterations=max_iters)


def spread_initial_guess(xhat, dmin: float) -> np.ndarray:
    """Afasta pontos vizinhos até que todas as distâncias sejam >= dmin.

    z_i = xhat_i + (l_i + r_i) / 2, com l empurrando para a esquerda e r
    (varredura espelhada) para a direita.
    """
    x = np.asarray(xhat, dtype=float)
    n = x.size
    left = np.zeros(n)
    right = np.zeros(n)
    tight = np.flatnonzero(np.diff(x) < dmin)

    for i in tight + 1:
        for j in range(i - 1, -1, -1):
            d = (x[j + 1] + left[j + 1]) - (x[j] + left[j]) - dmin
            if d < 0:
                left[j] += d
            else:
                break

    for i in tight[::-1]:
        for j in range(i + 1, n):
            d = (x[j] + right[j]) - (x[j - 1] + right[j - 1]) - dmin
            if d < 0:
                right[j] -= d
            else:
                break

    return x + 0.5 * (left + right)


def trust_region_scaling(z: np.ndarray) -> np.ndarray:
    """D_ii = min(z_i - z_{i-1}, z_{i+1} - z_i) / 3; nas pontas, o único vizinho."""
    gaps = np.diff(z)
    left = np.concatenate(([np.inf], gaps))
    right = np.concatenate((gaps, [np.inf]))
    return np.minimum(left, right) / 3.0


def _evaluate_trial(objective: Objective, z: np.ndarray):
    if np.any(np.diff(z) <= 0):
        return None
    try:
        return objective.evaluate(z)
    except InfiniteEnergyError:
        return None


def minimize(objective: Objective, z0, config: TrustRegionConfig = TrustRegionConfig()):
    """Retorna (z*, MinimizeStats)."""
    z = np.array(z0, dtype=float)
    if np.any(np.diff(z) <= 0):
        raise InfiniteEnergyError("ponto inicial deve ser estritamente crescente")
    value, gradient, hessian = objective.evaluate(z)

    delta = config.delta0
    lam = 0.0
    rejected = 0
    lambda_iterations = 0
    lambda_history: list[float] = []

    for iteration in range(config.max_iters + 1):
        d = trust_region_scaling(z)
        g_hat = d * gradient
        gradient_norm = float(np.max(np.abs(g_hat)))

        if gradient_norm <= config.grad_tol * (1.0 + abs(value)):
            stats = MinimizeStats(
                iterations=iteration,
                rejected_steps=rejected,
                lambda_iterations=lambda_iterations,
                value=value,
                gradient_norm=gradient_norm,
                final_radius=delta,
                lambda_history=tuple(lambda_history),
            )
            return z, stats
        if iteration == config.max_iters:
            break

        h_hat = hessian.scaled(d)
        sub = solve_subproblem(g_hat, h_hat, delta, lam, config.max_lambda_iters)
        lambda_iterations += sub.iterations
        lambda_history.append(sub.lam)
        lam = sub.lam

        predicted = -(np.dot(g_hat, sub.step) + 0.5 * h_hat.quadratic_form(sub.step))
        trial_z = z + d * sub.step
        trial = _evaluate_trial(objective, trial_z)

        if trial is None:
            ratio = -np.inf
        else:
            actual = value - trial[0]
            if sub.lam == 0.0 and 0.0 <= actual <= ROUNDOFF_TOL * (1.0 + abs(value)):
                ratio = 1.0
            elif predicted > 0:
                ratio = actual / predicted
            else:
                ratio = 1.0 if actual >= 0 else -np.inf

        if ratio < 0.25:
            delta /= 4.0
        elif ratio > 0.75 and sub.lam > 0.0:
            delta = min(2.0 * delta, config.delta_max)

        if ratio > config.eta:
            z = trial_z
            value, gradient, hessian = trial
        else:
            rejected += 1
            logger.debug("passo rejeitado (ratio=%.3e, delta=%.3e)", ratio, delta)

    raise ConvergenceError(
        f"região de confiança não convergiu em {config.max_iters} iterações",
        best=z,
        iterations=config.max_iters,
    )
