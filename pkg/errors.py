import functools
import logging
import sys

import click

logger = logging.getLogger(__name__)

INTERNAL_ERROR_EXIT = 70


class NumradError(Exception):
    """Base error; `exit_code` is what the CLI exits with."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParseError(NumradError):
    exit_code = 2


class DimensionError(NumradError, ValueError):
    exit_code = 3


class DomainError(NumradError, ValueError):
    exit_code = 3


class OutputError(NumradError):
    exit_code = 4


class ReconstructionError(NumradError):
    exit_code = 5

    def __init__(self, stage: str, deviation: float):
        super().__init__(f"reconstruction failed at stage '{stage}' (deviation {deviation:.3e})")
        self.stage = stage
        self.deviation = float(deviation)


def handle_errors(func):
    """Map library errors to stderr messages and exit codes for click commands."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NumradError as e:
            logger.error(f"{func.__name__} failed: {e.detail}")
            click.echo(f"error: {e.detail}", err=True)
            sys.exit(e.exit_code)
        except (click.exceptions.Exit, click.ClickException):
            raise
        except Exception as e:
            logger.error(f"Unexpected error in {func.__name__}: {str(e)}", exc_info=True)
            click.echo(f"error: internal error: {str(e)}", err=True)
            sys.exit(INTERNAL_ERROR_EXIT)

    return wrapper
