import argparse
import logging
import sys
from pathlib import Path

from app.core.exceptions import ConfigError, DomainError, ValidityHorizonError, VpsError
from app.core.logger import configure_logging
from app.dtos.runDtos import ConvergeConfig, RunConfig
from app.services.experiment_service import EXACT_PROFILES, experiment_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def comando_run(args: argparse.Namespace) -> int:
    """Executa uma simulação descrita por um documento JSON.

    Parâmetros:
    - `--config` (Path): documento `RunConfig`.

    Retorna:
    - 0 e grava perfis, energy.csv e report.json no diretório de saída.

    Erros possíveis:
    - 2: documento ilegível ou inválido.
    - 3: falha do solver (a mensagem traz o índice do passo).
    """
    config = experiment_service.load_config(args.config, RunConfig)
    report = experiment_service.run(config)
    if report.errors is not None:
        logger.info("erros finais: %s", report.errors.model_dump_json(exclude_none=True))
    return EXIT_OK


def comando_converge(args: argparse.Namespace) -> int:
    """Roda a escada de resoluções e grava convergence.csv.

    Parâmetros:
    - `--config` (Path): documento `ConvergeConfig` (modelo + `ladder`).

    Comportamento:
    - Um nível que falha é registrado na coluna `status`; os demais continuam.
    """
    config = experiment_service.load_config(args.config, ConvergeConfig)
    rows = experiment_service.converge(config)
    failed = sum(row.status != "ok" for row in rows)
    if failed:
        logger.warning("%d de %d níveis falharam", failed, len(rows))
    return EXIT_OK


def comando_exact(args: argparse.Namespace) -> int:
    """Tabela um perfil exato em `--grid` pontos uniformes no instante `--t`.

    Erros possíveis:
    - 2: perfil desconhecido ou `t` além do horizonte de validade.
    """
    path = experiment_service.exact(args.profile, args.t, args.grid, gamma=args.gamma)
    logger.info("perfil gravado em %s", path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vps",
        description="Esquemas variacionais de partículas em 1D: simulações, convergência e perfis exatos.",
    )
    parser.add_argument("--log-level", default=None, help="sobrescreve VPS_LOG_LEVEL")
    subcommands = parser.add_subparsers(dest="command", required=True)

    run = subcommands.add_parser("run", help="executa uma simulação")
    run.add_argument("--config", type=Path, required=True)
    run.set_defaults(handler=comando_run)

    converge = subcommands.add_parser("converge", help="estudo de convergência")
    converge.add_argument("--config", type=Path, required=True)
    converge.set_defaults(handler=comando_converge)

    exact = subcommands.add_parser("exact", help="tabela de uma solução exata")
    exact.add_argument("--profile", choices=sorted(EXACT_PROFILES), required=True)
    exact.add_argument("--t", type=float, required=True)
    exact.add_argument("--grid", type=int, required=True)
    exact.add_argument("--gamma", type=float, default=5.0 / 3.0)
    exact.set_defaults(handler=comando_exact)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except (ConfigError, DomainError, ValidityHorizonError) as exc:
        print(f"erro de configuração: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VpsError as exc:
        print(f"erro do solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
