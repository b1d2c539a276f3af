"""
Logging setup for command-line runs.

Library modules only create loggers; handlers are installed here, once,
by the entry point. Output goes to standard error so CSV on standard
output stays clean.
"""

import logging

from rich.console import Console
from rich.logging import RichHandler


def configure_logging(quiet: bool = False) -> None:
    """Route package logs to a rich handler on stderr."""
    handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        markup=False,
    )
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format="%(message)s",
        handlers=[handler],
        force=True,
    )
