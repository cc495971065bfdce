"""
Testes básicos para validar a infraestrutura: configurações, logging e erros
"""
import logging

import pytest

from app.core.config import Settings
from app.core.exceptions import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InvalidStateError,
    SolverStepError,
    VpsError,
)
from app.core.logger import configure_logging


def test_settings_defaults(monkeypatch):
    """Valores padrão quando nenhuma variável VPS_* está definida."""
    for name in ("VPS_OUTPUT_DIR", "VPS_LOG_LEVEL", "VPS_WORKERS", "VPS_EXACT_RESOLUTION"):
        monkeypatch.delenv(name, raising=False)
    config = Settings(_env_file=None)

    assert config.OUTPUT_DIR is None
    assert config.LOG_LEVEL == "INFO"
    assert config.WORKERS == 1
    assert config.EXACT_RESOLUTION == 20000


def test_settings_from_environment(monkeypatch, tmp_path):
    """Variáveis com prefixo VPS_ sobrescrevem os padrões."""
    monkeypatch.setenv("VPS_OUTPUT_DIR", str(tmp_path))
    monkeypatch.setenv("VPS_WORKERS", "4")
    config = Settings(_env_file=None)

    assert config.OUTPUT_DIR == tmp_path
    assert config.WORKERS == 4


def test_configure_logging_is_idempotent():
    configure_logging("DEBUG")
    configure_logging("WARNING")
    root = logging.getLogger("app")

    assert len([h for h in root.handlers if h.get_name() == "vps-stderr"]) == 1
    assert root.level == logging.WARNING


def test_error_hierarchy():
    """Erros de domínio também são ValueError; todos derivam de VpsError."""
    assert issubclass(DomainError, ValueError)
    assert issubclass(InvalidStateError, ValueError)
    assert issubclass(ConfigError, VpsError)

    with pytest.raises(VpsError):
        raise ConvergenceError("sem convergência")


def test_solver_step_error_carries_step():
    error = SolverStepError("pivô negativo", step=12)

    assert error.step == 12
    assert str(error) == "passo 12: pivô negativo"


def test_convergence_error_keeps_best_iterate():
    error = ConvergenceError("orçamento esgotado", best=[0.0, 1.0], iterations=200)

    assert error.best == [0.0, 1.0]
    assert error.iterations == 200
