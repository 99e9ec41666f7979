import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "tself"


def init(level: str = "WARNING") -> logging.Logger:
    """
    Attach one rich handler on stderr to the `tself` logger.

    Command results go to stdout through click; logs never do. Calling this
    again replaces the handler.
    """
    log = logging.getLogger(LOGGER_NAME)
    for handler in list(log.handlers):
        log.removeHandler(handler)

    handler = RichHandler(
        console=Console(stderr=True),
        rich_tracebacks=True,
        show_time=level == "DEBUG",
        show_path=level == "DEBUG",
    )
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    log.addHandler(handler)
    log.setLevel(level)
    log.propagate = False
    return log
