import logging
import os

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

load_dotenv()

LOG_LEVEL = os.getenv("SCALEFREE_LOG_LEVEL", "WARNING").upper()

_configured = False


def configure_logging(level: str | int | None = None) -> None:
    """Route library logging through a single rich handler on stderr."""
    global _configured
    level = level if level is not None else LOG_LEVEL
    root = logging.getLogger()
    if not _configured:
        handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        root.addHandler(handler)
        _configured = True
    root.setLevel(level)
