import logging

from app.core.config import settings


def configure_logging(level: str | None = None) -> None:
    """Configure root logging once for the CLI and the HTTP service."""
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
