"""
Logging set-up for the command line and verification scripts.
"""
import logging

from lexcluster.core.config import Settings


def configure_logging(settings: Settings, level: str | None = None) -> None:
    """Configure root logging once per process."""
    name = "DEBUG" if settings.debug else (level or settings.log_level)
    logging.basicConfig(
        level=getattr(logging, name.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
