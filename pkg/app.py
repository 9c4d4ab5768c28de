import logging

import click

import config
from commands.maps import classify, superop, verify
from commands.ranges import boundary, radius
from commands.repro import repro_example1

logger = logging.getLogger(__name__)


@click.group()
@click.option("--log", "log_level", default=None, help="quiet, info or debug; overrides NUMRAD_LOG.")
def cli(log_level):
    """Numerical ranges, radii and their preservers on tensor products."""
    config.init_logging(log_level)


# Register commands
cli.add_command(radius)
cli.add_command(boundary)
cli.add_command(superop)
cli.add_command(verify)
cli.add_command(classify)
cli.add_command(repro_example1)


if __name__ == "__main__":
    cli()
