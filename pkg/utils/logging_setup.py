import logging
import os
from datetime import datetime
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "INFO", logs_dir: Optional[str] = None) -> Optional[str]:
    """
    Set up logging with a console handler and, optionally, a file handler.

    The console handler writes to stderr so command output on stdout stays clean.

    Args:
        level (str): Root log level name
        logs_dir (str): Directory to store log files; console only when None

    Returns:
        The log file path, or None when logging to the console only
    """
    handlers: list = [logging.StreamHandler()]
    log_filename = None

    if logs_dir is not None:
        try:
            os.makedirs(logs_dir, exist_ok=True)
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_filename = os.path.join(logs_dir, f"ctw_{timestamp}.log")
            handlers.append(logging.FileHandler(log_filename))
        except (OSError, PermissionError):
            # Repertoire non inscriptible : console uniquement
            log_filename = None

    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, handlers=handlers, force=True)
    logging.getLogger().setLevel(level.upper())

    return log_filename
