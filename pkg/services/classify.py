import itertools
import logging
import math
from typing import Callable, Iterator, List, Literal

import numpy as np
from scipy.linalg import polar

from config import MAX_CLASSIFY_DIM, RESIDUAL_GATE, RESIDUAL_SAMPLES, SUPPORT_ANGLES, VERIFY_TOL
from errors import DimensionError, DomainError, ReconstructionError
from schemas.models import (
    AttainingBasis,
    CanonicalPreserver,
    ClassificationResult,
    ClassificationStatus,
    FactorType,
    SuperOperator,
    TensorDims,
    Verdict,
    VerdictStatus,
)
from services.linalg import kron_all, matrix_unit, phase_normalize
from services.numrange import numerical_radius, support_function
from services.preservers import apply, as_dims, canonical_on_product, canonical_to_superop
from utils.sampling import ginibre_factors, hermitian_factors

logger = logging.getLogger(__name__)

# Nilpotent 3x3 block whose Kronecker square changes numerical radius under a partial transpose
GAP_BLOCK = np.array([[0, 2, 0], [0, 0, 1], [0, 0, 0]], dtype=np.complex128)


def _padded_block(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.complex128)
    out[:3, :3] = GAP_BLOCK
    return out


def transpose_gap_witness(m: int, n: int):
    """(A, B) = (X ⊕ 0_{m-3}, X ⊕ 0_{n-3}): w(A⊗B) = sqrt(4.25) but w(A⊗B^t) = 2."""
    if m < 3 or n < 3:
        raise DomainError(f"witness needs both dimensions >= 3, got ({m}, {n})")
    return _padded_block(m), _padded_block(n)


def _check_dim(phi: SuperOperator, dims: TensorDims):
    if phi.dim != dims.total:
        raise DimensionError(f"superoperator acts on M_{phi.dim} but dims {dims.dims} give N = {dims.total}")


def _witness_products(dims: TensorDims) -> Iterator[List[np.ndarray]]:
    """The gap witness in every factor pair of size >= 3, E_11 elsewhere."""
    for i, j in itertools.combinations(range(dims.count), 2):
        if dims.dims[i] >= 3 and dims.dims[j] >= 3:
            factors = [matrix_unit(n, 0, 0) for n in dims.dims]
            factors[i], factors[j] = transpose_gap_witness(dims.dims[i], dims.dims[j])
            yield factors


def _diagonal_unit_products(dims: TensorDims) -> Iterator[List[np.ndarray]]:
    for idx in itertools.product(*(range(n) for n in dims.dims)):
        yield [matrix_unit(n, i, i) for n, i in zip(dims.dims, idx)]


def _random_products(dims: TensorDims, trials: int, rng: np.random.Generator, sampler=ginibre_factors):
    for _ in range(trials):
        yield sampler(dims.dims, rng)


def verify_radius_preservation(
    phi: SuperOperator, dims, trials: int = 100, tol: float = VERIFY_TOL, seed: int = 0
) -> Verdict:
    """First product A_1⊗...⊗A_m with |w(phi(P)) - w(P)| > tol, if any."""
    dims = as_dims(dims)
    _check_dim(phi, dims)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    samples = itertools.chain(
        _witness_products(dims),
        _diagonal_unit_products(dims),
        _random_products(dims, trials, rng),
    )
    count = 0
    for factors in samples:
        count += 1
        product = kron_all(factors)
        w_in = numerical_radius(product).radius
        w_out = numerical_radius(apply(phi, product)).radius
        logger.debug(f"sample {count}: w(P) = {w_in:.12g}, w(phi(P)) = {w_out:.12g}")
        if abs(w_in - w_out) > tol:
            logger.info(f"Radius violated on sample {count}: {w_in:.12g} -> {w_out:.12g}")
            return Verdict(
                status=VerdictStatus.VIOLATED,
                invariant="radius",
                witness=factors,
                w_input=w_in,
                w_output=w_out,
                samples=count,
            )
    logger.info(f"Radius preserved on {count} product samples")
    return Verdict(status=VerdictStatus.PRESERVING, invariant="radius", samples=count)


def verify_range_preservation(
    phi: SuperOperator, dims, trials: int = 100, tol: float = VERIFY_TOL, seed: int = 0
) -> Verdict:
    """Compares support functions of W(P) and W(phi(P)) on SUPPORT_ANGLES directions."""
    dims = as_dims(dims)
    _check_dim(phi, dims)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    thetas = 2 * np.pi * np.arange(SUPPORT_ANGLES) / SUPPORT_ANGLES
    samples = itertools.chain(
        _witness_products(dims),
        _diagonal_unit_products(dims),
        _random_products(dims, trials, rng),
        _random_products(dims, trials, rng, sampler=hermitian_factors),
    )
    count = 0
    for factors in samples:
        count += 1
        product = kron_all(factors)
        s_in = support_function(product, thetas)
        s_out = support_function(apply(phi, product), thetas)
        k = int(np.argmax(np.abs(s_in - s_out)))
        if abs(s_in[k] - s_out[k]) > tol:
            logger.info(f"Range violated on sample {count} at angle {thetas[k]:.4f}")
            return Verdict(
                status=VerdictStatus.VIOLATED,
                invariant="range",
                witness=factors,
                w_input=float(s_in[k]),
                w_output=float(s_out[k]),
                angle=float(thetas[k]),
                samples=count,
            )
    logger.info(f"Range preserved on {count} product samples")
    return Verdict(status=VerdictStatus.PRESERVING, invariant="range", samples=count)


def attaining_basis(phi: SuperOperator, dims, tol: float = VERIFY_TOL) -> AttainingBasis:
    """Radius-attaining vectors of B_idx = phi(E_{i_1 i_1} ⊗ ... ⊗ E_{i_m i_m}).

    For a preserver the vectors form an orthonormal basis and every other
    B_other annihilates u_idx.
    """
    dims = as_dims(dims)
    _check_dim(phi, dims)
    indices, blocks, vectors, phases = [], [], [], []
    for factors, idx in zip(_diagonal_unit_products(dims), itertools.product(*(range(n) for n in dims.dims))):
        block = apply(phi, kron_all(factors))
        result = numerical_radius(block)
        if abs(result.radius - 1.0) > tol:
            raise ReconstructionError("radius", abs(result.radius - 1.0))
        u = result.attaining_vector
        phase = complex(np.vdot(u, block @ u))
        if abs(abs(phase) - 1.0) > tol:
            raise ReconstructionError("radius", abs(abs(phase) - 1.0))
        indices.append(tuple(idx))
        blocks.append(block)
        vectors.append(u)
        phases.append(phase)

    vectors = np.column_stack(vectors)
    n = dims.total
    gram_deviation = float(np.max(np.abs(vectors.conj().T @ vectors - np.eye(n))))
    logger.debug(f"attaining basis gram deviation {gram_deviation:.3e}")
    if gram_deviation > math.sqrt(tol):
        raise ReconstructionError("gram", gram_deviation)

    leak = 0.0
    for k, block in enumerate(blocks):
        images = np.linalg.norm(block @ vectors, axis=0)
        images[k] = 0.0
        leak = max(leak, float(np.max(images)))
    if leak > math.sqrt(tol):
        raise ReconstructionError("annihilation", leak)
    return AttainingBasis(indices=indices, vectors=vectors, phases=np.array(phases))


def _flat_index(dims: TensorDims, multi) -> int:
    return int(np.ravel_multi_index(tuple(multi), dims.dims))


def _read_factor_types(psi: Callable, dims: TensorDims, xi: complex, tol: float) -> List[FactorType]:
    """E_12 in factor k, E_11 elsewhere: identity lands on (0, b), transpose on (b, 0)."""
    types = []
    for k, nk in enumerate(dims.dims):
        factors = [matrix_unit(n, 0, 0) for n in dims.dims]
        factors[k] = matrix_unit(nk, 0, 1)
        response = psi(kron_all(factors)) / xi
        multi = [0] * dims.count
        multi[k] = 1
        b = _flat_index(dims, multi)
        forward, backward = response[0, b], response[b, 0]
        pattern = np.zeros_like(response)
        pattern[0, b], pattern[b, 0] = forward, backward
        big, small = sorted([abs(forward), abs(backward)], reverse=True)
        deviation = max(abs(big - 1.0), small, float(np.linalg.norm(response - pattern)))
        logger.debug(f"type check on factor {k}: forward {abs(forward):.6f}, backward {abs(backward):.6f}")
        if deviation > math.sqrt(tol):
            raise ReconstructionError("type-probe", deviation)
        types.append(FactorType.IDENTITY if abs(forward) >= abs(backward) else FactorType.TRANSPOSE)
    return types


def _check_type_consistency(dims: TensorDims, types: List[FactorType]):
    large = {t for n, t in zip(dims.dims, types) if n >= 3}
    if len(large) > 1:
        raise ReconstructionError("type-consistency", 1.0)


def _absorb_diagonal_phases(
    psi: Callable, dims: TensorDims, types: List[FactorType], xi: complex, unitary: np.ndarray, tol: float
) -> np.ndarray:
    """Fix the per-column phases of U so that psi becomes xi · (⊗ phi_k) exactly.

    The test input for global index b maps under ⊗ phi_k to E_{0 b}, so its (0, b)
    entry reads off the relative phase of column b against column 0.
    """
    corrections = np.empty(dims.total, dtype=np.complex128)
    for flat, idx in enumerate(itertools.product(*(range(n) for n in dims.dims))):
        factors = [
            matrix_unit(n, 0, i) if t == FactorType.IDENTITY else matrix_unit(n, i, 0)
            for n, i, t in zip(dims.dims, idx, types)
        ]
        c = psi(kron_all(factors))[0, flat] / xi
        if abs(abs(c) - 1.0) > math.sqrt(tol):
            raise ReconstructionError("phase", abs(abs(c) - 1.0))
        corrections[flat] = c / abs(c)
    corrected, _ = polar(unitary * corrections.conj())
    return corrected


def _residual(phi: SuperOperator, preserver: CanonicalPreserver, seed: int) -> float:
    rng = np.random.default_rng([seed, 1])
    residual = 0.0
    for factors in _random_products(preserver.dims, RESIDUAL_SAMPLES, rng):
        diff = apply(phi, kron_all(factors)) - canonical_on_product(preserver, factors)
        residual = max(residual, float(np.linalg.norm(diff)))
    return residual


def classify_preserver(
    phi: SuperOperator,
    dims,
    tol: float = VERIFY_TOL,
    seed: int = 0,
    trials: int = 100,
    invariant: Literal["radius", "range"] = "radius",
) -> ClassificationResult:
    """Verify, then rebuild xi, U and the factor types of a canonical preserver."""
    dims = as_dims(dims)
    _check_dim(phi, dims)
    n = dims.total
    if n > MAX_CLASSIFY_DIM:
        raise DimensionError(f"classification supports N <= {MAX_CLASSIFY_DIM}, got N = {n}")

    verify = verify_radius_preservation if invariant == "radius" else verify_range_preservation
    verdict = verify(phi, dims, trials=trials, tol=tol, seed=seed)
    if verdict.status == VerdictStatus.VIOLATED:
        return ClassificationResult(status=ClassificationStatus.NOT_PRESERVING, verdict=verdict)

    try:
        basis = attaining_basis(phi, dims, tol)
        basis_unitary = np.column_stack([phase_normalize(basis.vectors[:, k]) for k in range(n)])

        def psi(x):
            return basis_unitary.conj().T @ apply(phi, x) @ basis_unitary

        psi_identity = psi(np.eye(n))
        xi = complex(np.trace(psi_identity) / n)
        deviation = max(float(np.linalg.norm(psi_identity - xi * np.eye(n))), abs(abs(xi) - 1.0))
        logger.debug(f"phi(I) deviation from xi*I: {deviation:.3e}")
        if deviation > math.sqrt(tol):
            raise ReconstructionError("phase", deviation)
        xi = xi / abs(xi)

        types = _read_factor_types(psi, dims, xi, tol)
        _check_type_consistency(dims, types)
        unitary = _absorb_diagonal_phases(psi, dims, types, xi, basis_unitary, tol)
        preserver = CanonicalPreserver(dims=dims, xi=xi, unitary=unitary, factor_types=types)

        residual = _residual(phi, preserver, seed)
        if residual > RESIDUAL_GATE:
            raise ReconstructionError("residual", residual)
    except ReconstructionError as e:
        logger.info(f"Classification stopped at stage '{e.stage}' (deviation {e.deviation:.3e})")
        return ClassificationResult(
            status=ClassificationStatus.RECONSTRUCTION_FAILED,
            verdict=verdict,
            stage=e.stage,
            diagnostic=e.deviation,
        )

    superop_deviation = float(np.linalg.norm(canonical_to_superop(preserver).matrix - phi.matrix))
    logger.info(f"Classified: xi = {xi:.6f}, types = {[t.value for t in types]}, residual = {residual:.3e}")
    return ClassificationResult(
        status=ClassificationStatus.CLASSIFIED,
        preserver=preserver,
        verdict=verdict,
        residual=residual,
        superop_deviation=superop_deviation,
    )
