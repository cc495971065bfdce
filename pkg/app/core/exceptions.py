"""Hierarquia de exceções dos esquemas variacionais."""

import numpy as np


class VpsError(Exception):
    """Raiz de todos os erros do pacote."""


class DomainError(VpsError, ValueError):
    """Argumento fora do domínio (densidade negativa, t <= 0, gamma <= 1, NaN)."""


class InvalidStateError(VpsError, ValueError):
    """Estado ou medida que viola seus invariantes."""


class InfiniteEnergyError(VpsError):
    """Posições coincidentes ou cruzadas: energia interna infinita."""


class NotPositiveDefiniteError(VpsError):
    """Fatoração de Cholesky encontrou pivô não positivo."""


class ConvergenceError(VpsError):
    """Orçamento de iterações esgotado.

    `best` guarda o melhor iterado conhecido (quando houver).
    """

    def __init__(self, message: str, best: np.ndarray | None = None, iterations: int = 0):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class SingularProjectionError(VpsError):
    """Matriz de massa singular (alguma célula com massa zero)."""


class UnsupportedPatternError(VpsError):
    """Dados de Riemann que formam vácuo."""


class ValidityHorizonError(VpsError):
    """Solução exata avaliada depois da primeira interação de ondas."""


class ConfigError(VpsError, ValueError):
    """Documento de experimento inconsistente."""


class SolverStepError(VpsError):
    """Falha dentro de um passo de tempo; `step` é o índice do passo."""

    def __init__(self, message: str, step: int):
        super().__init__(f"passo {step}: {message}")
        self.step = step
