"""This module ensures that the rich logging and exceptions handlers are used"""
import logging
import logging.config
import os
from typing import Optional

import click
import rich.traceback
from rich.console import Console

from renyi_spectrum.constants import (
    RENYI_SPECTRUM_LOG_LEVEL_ENV_VAR_KEY,
    RENYI_SPECTRUM_LOGGING_HANDLER,
)

# data goes to stdout, diagnostics to stderr
STDERR_CONSOLE = Console(stderr=True)


def configure_logging(level: Optional[str] = None):
    """
    This method routes the package loggers through `rich.logging.RichHandler`.

    The level comes from the argument, then from the environment, then from
    the handler defaults. Python warnings are captured into the same handler.
    """
    resolved = (
        level
        or os.environ.get(RENYI_SPECTRUM_LOG_LEVEL_ENV_VAR_KEY)
        or RENYI_SPECTRUM_LOGGING_HANDLER["level"]
    ).upper()
    handler = {
        **RENYI_SPECTRUM_LOGGING_HANDLER,
        "level": resolved,
        "console": "ext://renyi_spectrum.rich_init.STDERR_CONSOLE",
    }
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "handlers": {"console": handler},
            "loggers": {
                "renyi_spectrum": {
                    "level": resolved,
                    "handlers": ["console"],
                    "propagate": False,
                },
                "py.warnings": {"handlers": ["console"], "propagate": False},
            },
        }
    )
    # ensure warnings are caught by logger not stderr prints
    logging.captureWarnings(True)


def apply_rich_tracebacks():
    """
    This method ensures that unexpected tracebacks go through rich.

    The `suppress=[click]` argument hides the frames of the CLI framework so
    only the numerical code shows.
    """
    rich.traceback.install(show_locals=False, suppress=[click], console=STDERR_CONSOLE)


def start_up(level: Optional[str] = None):
    """This method runs the setup needed before any command executes"""
    configure_logging(level)
    apply_rich_tracebacks()
