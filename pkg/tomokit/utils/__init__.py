"""Utility functions for tomokit"""

from .logging import log, setup_logging, flush_logs
