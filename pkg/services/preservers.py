import logging
from typing import Callable, List, Sequence

import numpy as np

from errors import DimensionError, DomainError
from schemas.models import CanonicalPreserver, FactorType, SuperOperator, TensorDims
from services.linalg import as_matrix, kron_all, random_unitary, unvec, vec
from utils.sampling import ginibre

logger = logging.getLogger(__name__)

LINEARITY_TOL = 1e-10


def as_dims(dims) -> TensorDims:
    if isinstance(dims, TensorDims):
        return dims
    return TensorDims(dims=list(dims))


def _check_subset(dims: TensorDims, subset: Sequence[int]) -> List[int]:
    subset = sorted(set(int(k) for k in subset))
    for k in subset:
        if not 0 <= k < dims.count:
            raise DimensionError(f"factor index {k} out of range for {dims.count} factors")
    return subset


def factor_transpose(x, dims, subset: Sequence[int]) -> np.ndarray:
    """Transpose the listed tensor factors (0-based) of an N x N matrix."""
    dims = as_dims(dims)
    x = as_matrix(x)
    n = dims.total
    if x.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix for dims {dims.dims}, got {x.shape}")
    m = dims.count
    axes = list(range(2 * m))
    for k in _check_subset(dims, subset):
        axes[k], axes[k + m] = axes[k + m], axes[k]
    return np.transpose(x.reshape(dims.dims + dims.dims), axes).reshape(n, n)


def apply(phi: SuperOperator, x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape != (phi.dim, phi.dim):
        raise DimensionError(f"superoperator acts on {phi.dim}x{phi.dim} matrices, got {x.shape}")
    return unvec(phi.matrix @ vec(x), phi.dim)


def _spot_check_linearity(phi: SuperOperator, f: Callable, seed: int):
    rng = np.random.default_rng(seed)
    n = phi.dim
    for _ in range(3):
        x, y = ginibre(n, rng), ginibre(n, rng)
        a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        lhs = np.asarray(f(a * x + b * y))
        rhs = a * np.asarray(f(x)) + b * np.asarray(f(y))
        scale = 1.0 + np.linalg.norm(lhs) + np.linalg.norm(rhs)
        if np.linalg.norm(lhs - rhs) > LINEARITY_TOL * scale:
            raise DomainError("function failed the linearity spot check")
        if np.linalg.norm(apply(phi, x) - np.asarray(f(x))) > LINEARITY_TOL * scale:
            raise DomainError("function disagrees with its superoperator on a random input")


def superop_from_function(dims, f: Callable, check_linearity: bool = True, seed: int = 0) -> SuperOperator:
    """Column k of the result is vec(f(unvec(e_k)))."""
    dims = as_dims(dims)
    n = dims.total
    columns = []
    for k in range(n * n):
        basis = np.zeros(n * n, dtype=np.complex128)
        basis[k] = 1.0
        out = np.asarray(f(unvec(basis, n)), dtype=np.complex128)
        if out.shape != (n, n):
            raise DimensionError(f"function returned shape {out.shape}, expected {(n, n)}")
        columns.append(vec(out))
    phi = SuperOperator(dim=n, matrix=np.column_stack(columns))
    if check_linearity:
        _spot_check_linearity(phi, f, seed)
    return phi


def identity_superop(dims) -> SuperOperator:
    n = as_dims(dims).total
    return SuperOperator(dim=n, matrix=np.eye(n * n, dtype=np.complex128))


def scaled_identity_superop(dims, c: complex) -> SuperOperator:
    n = as_dims(dims).total
    return SuperOperator(dim=n, matrix=complex(c) * np.eye(n * n, dtype=np.complex128))


def conjugation_superop(u: np.ndarray) -> SuperOperator:
    """X -> U X U*, i.e. conj(U) ⊗ U under column stacking."""
    u = as_matrix(u)
    return SuperOperator(dim=u.shape[0], matrix=np.kron(u.conj(), u))


def partial_transpose_superop(dims, subset: Sequence[int]) -> SuperOperator:
    dims = as_dims(dims)
    subset = _check_subset(dims, subset)
    if not subset:
        raise DomainError("partial transpose needs at least one factor")
    return superop_from_function(dims, lambda x: factor_transpose(x, dims, subset), check_linearity=False)


def canonical_to_superop(p: CanonicalPreserver) -> SuperOperator:
    n = p.dims.total
    transpose = np.eye(n * n, dtype=np.complex128)
    if p.transposed_factors:
        transpose = partial_transpose_superop(p.dims, p.transposed_factors).matrix
    return SuperOperator(dim=n, matrix=p.xi * np.kron(p.unitary.conj(), p.unitary) @ transpose)


def canonical_on_product(p: CanonicalPreserver, factors: Sequence[np.ndarray]) -> np.ndarray:
    """xi U (phi_1(A_1) ⊗ ... ⊗ phi_m(A_m)) U* evaluated directly."""
    if [np.shape(a) for a in factors] != [(n, n) for n in p.dims.dims]:
        raise DimensionError(f"factor shapes do not match dims {p.dims.dims}")
    mapped = [a.T if t == FactorType.TRANSPOSE else a for a, t in zip(factors, p.factor_types)]
    return p.xi * p.unitary @ kron_all(mapped) @ p.unitary.conj().T


def random_canonical(
    dims, seed, factor_types: Sequence[FactorType] | None = None, xi: complex | None = None
) -> CanonicalPreserver:
    """Seeded canonical preserver with a Haar unitary and a uniform phase.

    Without explicit types, factors of size >= 3 share one random type and
    2x2 factors draw theirs independently.
    """
    dims = as_dims(dims)
    rng = np.random.default_rng(seed)
    if xi is None:
        xi = np.exp(2j * np.pi * rng.random())
    unitary = random_unitary(dims.total, rng)
    if factor_types is None:
        shared = FactorType.TRANSPOSE if rng.random() < 0.5 else FactorType.IDENTITY
        factor_types = [
            shared if n >= 3 else (FactorType.TRANSPOSE if rng.random() < 0.5 else FactorType.IDENTITY)
            for n in dims.dims
        ]
    return CanonicalPreserver(dims=dims, xi=complex(xi), unitary=unitary, factor_types=list(factor_types))


def _flip(t: FactorType) -> FactorType:
    return FactorType.IDENTITY if t == FactorType.TRANSPOSE else FactorType.TRANSPOSE


def compose_canonical(outer: CanonicalPreserver, inner: CanonicalPreserver) -> CanonicalPreserver:
    """outer ∘ inner, when that composition is again canonical."""
    if outer.dims.dims != inner.dims.dims:
        raise DimensionError(f"cannot compose maps on dims {outer.dims.dims} and {inner.dims.dims}")
    xi = outer.xi * inner.xi
    xi = xi / abs(xi)
    if not outer.transposed_factors:
        unitary, types = outer.unitary @ inner.unitary, list(inner.factor_types)
    elif len(outer.transposed_factors) == outer.dims.count:
        unitary, types = outer.unitary @ inner.unitary.conj(), [_flip(t) for t in inner.factor_types]
    elif np.allclose(inner.unitary, np.eye(inner.dims.total), rtol=0.0, atol=1e-12):
        # partial transposes commute and compose factorwise
        unitary = outer.unitary
        types = [_flip(t) if o == FactorType.TRANSPOSE else t for o, t in zip(outer.factor_types, inner.factor_types)]
    else:
        raise DomainError("composition is canonical only when the outer map transposes all or none of the factors")
    return CanonicalPreserver(dims=outer.dims, xi=complex(xi), unitary=unitary, factor_types=types)
