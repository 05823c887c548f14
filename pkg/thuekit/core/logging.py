import logging
import sys
from pathlib import Path

from thuekit.core.config import settings


def setup_logging(level: str = None):
    """
    Setup centralized logging configuration.

    Console output goes to stderr so the CLI can keep stdout for results.
    """
    handlers = [logging.StreamHandler(sys.stderr)]

    if settings.LOG_FILE:
        log_path = Path(settings.LOG_FILE)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path))

    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )

    return logging.getLogger("thuekit")


# Create a default logger
logger = setup_logging()
