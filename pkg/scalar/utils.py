import logging
import sys
from datetime import datetime
from pathlib import Path


def setup_logging(log_level: str = 'INFO', log_dir: str | None = 'logs') -> logging.Logger:
    """Set up logging configuration."""
    level = getattr(logging, log_level.upper())

    # Create logger
    logger = logging.getLogger()
    logger.setLevel(level)

    # Repeated calls (tests, CLI then serve) must not stack handlers
    for handler in list(logger.handlers):
        if getattr(handler, '_scalar_handler', False):
            logger.removeHandler(handler)
            handler.close()

    # Formatter
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s', datefmt='%Y-%m-%d %H:%M:%S')

    # Console handler
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    console_handler._scalar_handler = True  # type: ignore[attr-defined]
    logger.addHandler(console_handler)

    # File handler
    if log_dir:
        directory = Path(log_dir)
        directory.mkdir(parents=True, exist_ok=True)
        log_file = directory / f'scalar_{datetime.now().strftime("%Y%m%d")}.log'
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        file_handler._scalar_handler = True  # type: ignore[attr-defined]
        logger.addHandler(file_handler)

    return logger


def format_duration(seconds: float) -> str:
    """Format duration in seconds to human readable string."""
    if seconds < 1:
        return f'{seconds * 1000:.1f}ms'
    if seconds < 60:
        return f'{seconds:.2f}s'
    whole = int(seconds)
    if whole < 3600:
        minutes = whole // 60
        secs = whole % 60
        return f'{minutes}m {secs}s'
    hours = whole // 3600
    minutes = (whole % 3600) // 60
    return f'{hours}h {minutes}m'
