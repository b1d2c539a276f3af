"""Command-line entry point."""

from src.cli.main import cli, main, run

__all__ = ["cli", "main", "run"]
