"""Console output for the CLI, through rich when it is installed.

Results (``key=value`` lines, CSV rows) go to stdout; status messages and logs
go to stderr.
"""

import logging
import re
import sys
from typing import Any, Optional

try:
    from rich.console import Console
    from rich.logging import RichHandler

    RICH_AVAILABLE = True
except ImportError:
    RICH_AVAILABLE = False

_MARKUP = re.compile(r"\[/?[a-z ]+\]")

_status_console: Optional["Console"] = None


class FallbackConsole:
    """Plain stderr console used without rich."""

    def print(self, message: str = "", style: Optional[str] = None) -> None:
        print(_MARKUP.sub("", message), file=sys.stderr)


def get_status_console() -> "Console":
    global _status_console
    if _status_console is None:
        _status_console = (
            Console(stderr=True, highlight=False) if RICH_AVAILABLE else FallbackConsole()
        )
    return _status_console


def _status(symbol: str, style: str, message: str) -> None:
    get_status_console().print(f"{symbol} {message}", style=style)


def print_success(message: str) -> None:
    _status("✓", "green bold", message)


def print_error(message: str) -> None:
    _status("✗", "red bold", message)


def print_warning(message: str) -> None:
    _status("⚠", "yellow bold", message)


def format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def print_key_values(values: dict[str, Any]) -> None:
    """One ``key=value`` line per entry on stdout, floats with 17 significant digits."""
    for key, value in values.items():
        print(f"{key}={format_value(value)}")


def print_check(name: str, passed: bool, applicable: bool, margin: float) -> None:
    """One ``name: pass|FAIL margin=...`` line on stdout."""
    status = "pass" if passed else "FAIL"
    if not applicable:
        status += " (not applicable)"
    print(f"{name}: {status} margin={margin:.6g}")


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Route cqwave logging to stderr; DEBUG with ``verbose``, WARNING with ``quiet``."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    if RICH_AVAILABLE:
        handler: logging.Handler = RichHandler(
            console=Console(stderr=True), show_path=False, rich_tracebacks=False
        )
        fmt = "%(message)s"
    else:
        handler = logging.StreamHandler()
        fmt = "%(levelname)s %(name)s: %(message)s"
    handler.setFormatter(logging.Formatter(fmt))
    root = logging.getLogger("cqwave")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False
