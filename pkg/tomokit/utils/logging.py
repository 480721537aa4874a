"""Logging utilities for tomokit"""

import os
import sys
import logging
from datetime import datetime

# Global flag to track if logging has been initialized
_logging_initialized = False

# Library logger stays silent until setup_logging is called
log = logging.getLogger("tomokit")
log.addHandler(logging.NullHandler())
log.propagate = False

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def _numeric_level(log_level):
    numeric_level = getattr(logging, str(log_level).upper(), None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.INFO
    return numeric_level


def setup_logging(log_level="INFO", log_dir=None):
    """Set up logging to console and, optionally, a timestamped file

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_dir: Directory for log files; None logs to the console only

    Returns:
        Configured logger
    """
    global _logging_initialized

    numeric_level = _numeric_level(log_level)

    if _logging_initialized:
        if log.level != numeric_level:
            log.setLevel(numeric_level)
            log.debug(f"Updated log level to {log_level}")
        return log

    for handler in log.handlers[:]:
        log.removeHandler(handler)

    # stdout is reserved for command output (CSV rows, report blocks)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
    log.addHandler(console_handler)

    log_file = None
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        log_file = os.path.join(log_dir, f"tomokit_{timestamp}.log")
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
        log.addHandler(file_handler)

    log.setLevel(numeric_level)
    _logging_initialized = True

    log.debug(f"Logging initialized at level {log_level}")
    if log_file:
        log.info(f"Log file: {log_file}")

    return log


def flush_logs():
    """Force file handlers to write to disk"""
    for handler in log.handlers:
        if isinstance(handler, logging.FileHandler):
            handler.flush()
