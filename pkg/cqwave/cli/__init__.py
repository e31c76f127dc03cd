"""Command-line interface for cqwave."""

from cqwave.cli.main import main

__all__ = ["main"]
