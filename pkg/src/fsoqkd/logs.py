import logging
import sys

_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO}


def configure_logging(verbosity: int = 0) -> None:
    """Configure the root logger for CLI use.

    0 prints errors only, -v warnings, -vv info and -vvv debug. Library modules never call this.
    """
    level = _LEVELS.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )
