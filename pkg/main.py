import argparse
import logging
import logging.config
import os
import sys

from app.commands import bmp, gkm, graph, kl, pullback, verify
from app.lib.exceptions import AlgebraError, InputError
from config import get_settings

logger = logging.getLogger("app.main")

COMMANDS = (graph, gkm, bmp, kl, pullback, verify)


def create_cli() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Canonical sheaves on Bruhat moment graphs and Kazhdan-Lusztig polynomials",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging() -> None:
    settings = get_settings()
    if os.path.isfile(settings.LOG_CONFIG):
        logging.config.fileConfig(settings.LOG_CONFIG, disable_existing_loggers=False)
    else:
        logging.basicConfig(stream=sys.stderr, level=logging.WARNING)
    if settings.LOG_LEVEL:
        logging.getLogger().setLevel(settings.LOG_LEVEL.upper())


def run(argv: list[str] | None = None) -> int:
    """0 on success, 1 when a check or a computation fails, 2 on bad input."""
    configure_logging()
    parser = create_cli()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.detail)
        return 2
    except AlgebraError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.detail)
        return 1


if __name__ == "__main__":
    sys.exit(run())
