import logging
import os
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

_installed_handlers = []


def setup_logging(config, verbose=False):
    """Configure logging for the command application

    Console output goes to stderr; stdout is reserved for reports.
    """
    log_level = getattr(logging, str(config.LOG_LEVEL).upper(), logging.INFO)
    console_level = logging.DEBUG if verbose else log_level

    formatter = logging.Formatter(LOG_FORMAT)

    root_logger = logging.getLogger()
    # Re-running setup (tests, repeated create_app) must not stack handlers
    for handler in _installed_handlers:
        root_logger.removeHandler(handler)
        handler.close()
    _installed_handlers.clear()

    if config.LOG_TO_FILE:
        # Create logs directory if it doesn't exist
        log_dir = os.path.dirname(config.LOG_FILE)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

        # File handler with rotation
        file_handler = RotatingFileHandler(
            config.LOG_FILE,
            maxBytes=10485760,  # 10MB
            backupCount=5,
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)
        _installed_handlers.append(file_handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)
    _installed_handlers.append(console_handler)

    root_logger.setLevel(min(log_level, console_level))

    return logging.getLogger("qstar")


def log_check_result(name, passed, details=None):
    """Log the outcome of one verification check"""
    logger = logging.getLogger("verification")

    log_data = {
        "check": name,
        "status": "pass" if passed else "fail",
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }

    if details:
        log_data["details"] = details

    if passed:
        logger.info(f"Check: {log_data}")
    else:
        logger.error(f"Check: {log_data}")


def log_table_activity(kind, key, details=None):
    """Log table builds and cache activity"""
    logger = logging.getLogger("tables")

    log_data = {
        "kind": kind,
        "key": key,
    }

    if details:
        log_data["details"] = details

    logger.debug(f"Table Activity: {log_data}")
