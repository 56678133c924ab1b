"""
Logging setup shared by every module of the package.

Modules call get_logger(__name__) once at import time. The level comes from
the DELTACHANNEL_LOG_LEVEL environment variable (default WARNING) and can be
changed later with set_level(), which the command-line front end does for
-v/-vv. Records go to standard error so CSV written to standard output stays
clean.
"""

import logging
import os
import sys

ROOT_NAME = "deltachannel"
LOG_FORMAT = "%(asctime)s %(levelname)-8s %(name)s: %(message)s"

_configured = False


def _configure_root():
    """
    Attach a single stderr handler to the package root logger.

    Returns:
        logging.Logger: The package root logger.
    """
    global _configured
    root = logging.getLogger(ROOT_NAME)
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(os.environ.get("DELTACHANNEL_LOG_LEVEL", "WARNING").upper())
        root.propagate = False
        _configured = True
    return root


def get_logger(name):
    """
    Return a logger below the package root.

    Args:
        name (str): Usually the calling module's __name__.

    Returns:
        logging.Logger: The named logger.
    """
    _configure_root()
    if not name.startswith(ROOT_NAME):
        name = f"{ROOT_NAME}.{name}"
    return logging.getLogger(name)


def set_level(level):
    """
    Change the level of the package root logger.

    Args:
        level (int | str): A logging level, e.g. logging.DEBUG or "INFO".
    """
    _configure_root().setLevel(level)
