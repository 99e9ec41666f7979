"""
tself.utils.clicks - click glue shared by the sub-commands

Library code raises tself.errors; commands wrap their body in
`translate_errors()` so those surface as click exceptions with the exit
codes documented in tself.cli.
"""

from __future__ import annotations

from contextlib import contextmanager
from logging import getLogger

import click

from tself.errors import TselfError
from tself.utils.symbols import FAIL

log = getLogger("tself")

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SELFTEST = 3


class DataFailure(click.ClickException):
    exit_code = EXIT_DATA

    def format_message(self) -> str:
        return f"{FAIL} {self.message}"


class SelftestFailure(click.ClickException):
    exit_code = EXIT_SELFTEST


@contextmanager
def translate_errors():
    try:
        yield
    except TselfError as e:
        log.debug("command failed", exc_info=True)
        raise DataFailure(str(e)) from e
    except OSError as e:
        raise DataFailure(f"{e.filename or ''}: {e.strerror}".lstrip(": ")) from e


def float_list(ctx, param, value: str | None) -> tuple[float, ...]:
    """Callback for comma-separated float options such as --isolines 0.6,0.7."""
    if value is None or value.strip() == "":
        return ()
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")


__all__ = ["EXIT_USAGE", "EXIT_DATA", "EXIT_SELFTEST", "DataFailure", "SelftestFailure", "translate_errors", "float_list"]
