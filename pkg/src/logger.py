"""
Logging configuration for the triangular ratio metric toolkit
"""

import logging
import sys
import os
from typing import Optional

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.config import LOG_LEVEL, LOG_FILE


def setup_logger(name: str = 'trimetric', level: str = LOG_LEVEL,
                 log_file: Optional[str] = LOG_FILE) -> logging.Logger:
    """
    Set up and configure logger for the toolkit

    Reports are written to stdout, so console logging goes to stderr.

    Args:
        name: Name of the logger
        level: Level name, e.g. 'DEBUG'; unknown names fall back to INFO
        log_file: Optional file that receives DEBUG records with timestamps

    Returns:
        Configured logger instance
    """
    # Create logger
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    # Remove any existing handlers
    logger.handlers.clear()
    # Records stay off the root logger's stdout handlers
    logger.propagate = False

    # Create formatters
    file_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    console_formatter = logging.Formatter(
        '%(levelname)s - %(message)s'
    )

    # File handler
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

    # Console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.INFO)
    console_handler.setFormatter(console_formatter)
    logger.addHandler(console_handler)

    return logger


# Global logger instance
logger = setup_logger()
