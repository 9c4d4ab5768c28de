import json
import logging

import click
import numpy as np

from config import RADIUS_TOL
from errors import handle_errors
from services.numrange import boundary_points, numerical_radius
from utils.matrix_io import read_matrix, write_boundary_csv

logger = logging.getLogger(__name__)


def format_vector(vector: np.ndarray) -> str:
    return json.dumps([[float(z.real), float(z.imag)] for z in vector])


@click.command()
@click.argument("input_path", metavar="INPUT")
@click.option("--tol", type=float, default=RADIUS_TOL, show_default=True, help="Angle refinement tolerance.")
@handle_errors
def radius(input_path, tol):
    """Numerical radius of the matrix stored in INPUT."""
    logger.info(f"Computing numerical radius of {input_path}")
    result = numerical_radius(read_matrix(input_path), tol=tol)
    click.echo(f"radius: {result.radius:.17g}")
    click.echo(f"theta_star: {result.theta_star:.17g}")
    click.echo(f"attaining_vector: {format_vector(result.attaining_vector)}")


@click.command()
@click.argument("input_path", metavar="INPUT")
@click.option("--count", type=int, default=360, show_default=True, help="Number of equispaced angles.")
@click.option("--out", "out_path", required=True, help="CSV file to write.")
@handle_errors
def boundary(input_path, count, out_path):
    """Support points of the numerical range of INPUT, written as CSV."""
    logger.info(f"Sampling {count} boundary points of {input_path}")
    points = boundary_points(read_matrix(input_path), count)
    write_boundary_csv(out_path, points)
    click.echo(f"wrote {len(points)} points to {out_path}")
