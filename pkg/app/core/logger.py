import logging
import sys

from app.core.config import settings

_HANDLER_NAME = "vps-stderr"


def configure_logging(level: str | None = None) -> None:
    """Instala um único handler em stderr para a árvore de loggers `app`.

    Chamadas repetidas apenas atualizam o nível.
    """
    root = logging.getLogger("app")
    root.setLevel((level or settings.LOG_LEVEL).upper())

    if any(h.get_name() == _HANDLER_NAME for h in root.handlers):
        return

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
    root.addHandler(handler)
    root.propagate = False
