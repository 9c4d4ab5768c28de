import logging
import math
import sys

import click
import numpy as np

from errors import handle_errors
from services.classify import transpose_gap_witness
from services.numrange import numerical_radius

logger = logging.getLogger(__name__)

EXPECTED_PRODUCT = math.sqrt(4.25)
EXPECTED_TRANSPOSED = 2.0
MATCH_TOL = 1e-8


@click.command(name="repro-example1")
@click.option("--m", "m", type=int, default=3, show_default=True, help="Size of the first factor.")
@click.option("--n", "n", type=int, default=3, show_default=True, help="Size of the second factor.")
@handle_errors
def repro_example1(m, n):
    """Partial transpose gap: w(A⊗B) = sqrt(4.25) while w(A⊗B^t) = w(A^t⊗B) = 2."""
    a, b = transpose_gap_witness(m, n)
    product = numerical_radius(np.kron(a, b)).radius
    second = numerical_radius(np.kron(a, b.T)).radius
    first = numerical_radius(np.kron(a.T, b)).radius
    logger.info(f"Gap witness on M_{m} ⊗ M_{n}: {product:.12g} vs {second:.12g}")

    click.echo(f"{'quantity':<12}{'value':>22}{'expected':>22}")
    click.echo(f"{'w(A⊗B)':<12}{product:>22.16f}{EXPECTED_PRODUCT:>22.16f}")
    click.echo(f"{'w(A⊗Bᵗ)':<12}{second:>22.16f}{EXPECTED_TRANSPOSED:>22.16f}")
    click.echo(f"{'w(Aᵗ⊗B)':<12}{first:>22.16f}{EXPECTED_TRANSPOSED:>22.16f}")
    click.echo(f"{'difference':<12}{product - second:>22.16f}{EXPECTED_PRODUCT - EXPECTED_TRANSPOSED:>22.16f}")

    passed = (
        abs(product - EXPECTED_PRODUCT) <= MATCH_TOL
        and abs(second - EXPECTED_TRANSPOSED) <= MATCH_TOL
        and abs(first - EXPECTED_TRANSPOSED) <= MATCH_TOL
    )
    click.echo("PASS" if passed else "FAIL")
    if not passed:
        sys.exit(1)
