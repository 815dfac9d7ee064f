import logging

from ildtt.config import Config

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def setup_logging(config: Config) -> None:
    """Attach a single stream handler to the package logger."""
    logger = logging.getLogger("ildtt")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if config.debug else config.log_level.upper())
    logger.propagate = False
