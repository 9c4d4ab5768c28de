import logging
import sys

import click
from pydantic import ValidationError

from config import VERIFY_TOL
from errors import DimensionError, ReconstructionError, handle_errors
from schemas.models import ClassificationStatus, FactorType, TensorDims, Verdict, VerdictStatus
from services.classify import classify_preserver, verify_radius_preservation, verify_range_preservation
from services.preservers import (
    canonical_to_superop,
    identity_superop,
    partial_transpose_superop,
    random_canonical,
    scaled_identity_superop,
)
from utils.matrix_io import matrix_json, read_superop, write_matrix, write_superop

logger = logging.getLogger(__name__)

VIOLATED_EXIT = 1

INVARIANTS = click.Choice(["radius", "range"])


def parse_dims(ctx, param, value: str) -> TensorDims:
    try:
        return TensorDims(dims=[int(part) for part in value.split(",")])
    except (ValueError, ValidationError):
        raise click.BadParameter(f"expected comma-separated factor sizes >= 2, got '{value}'")


def parse_complex(ctx, param, value: str) -> complex:
    try:
        return complex(value.replace(" ", ""))
    except ValueError:
        raise click.BadParameter(f"not a complex number: '{value}'")


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def echo_verdict(verdict: Verdict):
    click.echo(f"status: {verdict.status.value}")
    click.echo(f"invariant: {verdict.invariant}")
    click.echo(f"samples: {verdict.samples}")
    if verdict.status != VerdictStatus.VIOLATED:
        return
    for k, factor in enumerate(verdict.witness, start=1):
        click.echo(f"witness[{k}]: {matrix_json(factor)}")
    label = "w" if verdict.invariant == "radius" else "support"
    click.echo(f"{label}_input: {verdict.w_input:.17g}")
    click.echo(f"{label}_output: {verdict.w_output:.17g}")
    if verdict.angle is not None:
        click.echo(f"angle: {verdict.angle:.17g}")
    click.echo(f"gap: {verdict.gap:.17g}")


@click.command()
@click.option(
    "--kind",
    type=click.Choice(["identity", "scaled", "partial-transpose", "canonical"]),
    required=True,
)
@click.option("--dims", "dims", required=True, callback=parse_dims, help="Factor sizes, e.g. 3,3.")
@click.option("--scale", default="1", callback=parse_complex, help="Complex factor for --kind scaled.")
@click.option(
    "--transpose", "transposed", type=int, multiple=True, help="0-based factor to transpose (repeatable)."
)
@click.option("--seed", type=int, default=None, help="Seed for --kind canonical.")
@click.option("--out", "out_path", required=True, help="SuperOpFile to write.")
@handle_errors
def superop(kind, dims, scale, transposed, seed, out_path):
    """Write a superoperator file for a standard map on DIMS."""
    if kind == "identity":
        phi = identity_superop(dims)
    elif kind == "scaled":
        phi = scaled_identity_superop(dims, scale)
    elif kind == "partial-transpose":
        phi = partial_transpose_superop(dims, transposed)
    else:
        if seed is None:
            raise click.UsageError("--seed is required for --kind canonical")
        if any(not 0 <= k < dims.count for k in transposed):
            raise DimensionError(f"factor index out of range for {dims.count} factors: {list(transposed)}")
        types = [FactorType.TRANSPOSE if k in transposed else FactorType.IDENTITY for k in range(dims.count)]
        phi = canonical_to_superop(random_canonical(dims, seed, factor_types=types))
    write_superop(out_path, dims, phi)
    logger.info(f"Built {kind} superoperator on dims {dims.dims}")
    click.echo(f"wrote {kind} superoperator on dims {','.join(map(str, dims.dims))} to {out_path}")


@click.command()
@click.argument("input_path", metavar="INPUT")
@click.option("--trials", type=int, default=100, show_default=True, help="Random product samples.")
@click.option("--seed", type=int, required=True)
@click.option("--tol", type=float, default=VERIFY_TOL, show_default=True)
@click.option("--invariant", type=INVARIANTS, default="radius", show_default=True)
@handle_errors
def verify(input_path, trials, seed, tol, invariant):
    """Check that the superoperator in INPUT preserves w (or W) on tensor products."""
    dims, phi = read_superop(input_path)
    logger.info(f"Verifying {invariant} preservation on dims {dims.dims} ({trials} trials, seed {seed})")
    check = verify_radius_preservation if invariant == "radius" else verify_range_preservation
    verdict = check(phi, dims, trials=trials, tol=tol, seed=seed)
    echo_verdict(verdict)
    if verdict.status == VerdictStatus.VIOLATED:
        sys.exit(VIOLATED_EXIT)


@click.command()
@click.argument("input_path", metavar="INPUT")
@click.option("--tol", type=float, default=VERIFY_TOL, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--trials", type=int, default=100, show_default=True, help="Random product samples.")
@click.option("--invariant", type=INVARIANTS, default="radius", show_default=True)
@click.option("--emit-u", "emit_u", default=None, help="Write the recovered unitary to this MatrixFile.")
@handle_errors
def classify(input_path, tol, seed, trials, invariant, emit_u):
    """Reconstruct the canonical form of the preserver in INPUT."""
    dims, phi = read_superop(input_path)
    logger.info(f"Classifying superoperator on dims {dims.dims}")
    result = classify_preserver(phi, dims, tol=tol, seed=seed, trials=trials, invariant=invariant)
    click.echo(f"classification: {result.status.value}")

    if result.status == ClassificationStatus.NOT_PRESERVING:
        echo_verdict(result.verdict)
        sys.exit(VIOLATED_EXIT)
    if result.status == ClassificationStatus.RECONSTRUCTION_FAILED:
        click.echo(f"stage: {result.stage}")
        click.echo(f"diagnostic: {result.diagnostic:.3e}")
        sys.exit(ReconstructionError.exit_code)

    preserver = result.preserver
    click.echo(f"xi: {format_complex(preserver.xi)}")
    click.echo(f"factor_types: {','.join(t.value for t in preserver.factor_types)}")
    click.echo(f"residual: {result.residual:.3e}")
    click.echo(f"superop_deviation: {result.superop_deviation:.3e}")
    if emit_u:
        write_matrix(emit_u, preserver.unitary)
        click.echo(f"unitary written to {emit_u}")
