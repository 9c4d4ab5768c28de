import functools
import logging
import math
from typing import Sequence

import numpy as np

from config import HERMITIAN_TOL, UNIT_TOL
from errors import DimensionError, DomainError
from schemas.models import HermitianEigen

logger = logging.getLogger(__name__)


def as_matrix(data) -> np.ndarray:
    """Copy `data` into a finite complex128 2-D array."""
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got an array of shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DomainError("matrix entries must be finite")
    return matrix


def require_square(matrix: np.ndarray, what: str = "matrix"):
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{what} must be square, got {matrix.shape[0]}x{matrix.shape[1]}")


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    unit = np.zeros((n, n), dtype=np.complex128)
    unit[i, j] = 1.0
    return unit


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Sequence) -> np.ndarray:
    """A_1 ⊗ ... ⊗ A_m, factor 1 slowest-varying."""
    if len(factors) == 0:
        raise DimensionError("at least one factor is required")
    return functools.reduce(kron, factors)


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorisation: vec(A X B) = (B^t ⊗ A) vec(X)."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray, n: int | None = None) -> np.ndarray:
    vector = np.asarray(vector)
    if n is None:
        n = math.isqrt(vector.size)
    if n * n != vector.size:
        raise DimensionError(f"cannot reshape a vector of length {vector.size} into a square matrix")
    return vector.reshape((n, n), order="F")


def is_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return np.linalg.norm(matrix - matrix.conj().T) <= tol * (1.0 + np.linalg.norm(matrix))


def is_unitary(matrix: np.ndarray, tol: float = 1e-10) -> bool:
    n = matrix.shape[0]
    return matrix.shape == (n, n) and np.linalg.norm(matrix.conj().T @ matrix - np.eye(n)) <= tol


def hermitian_eigen(h) -> HermitianEigen:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = as_matrix(h)
    require_square(h, "Hermitian input")
    if not is_hermitian(h):
        raise DomainError("matrix is not Hermitian within tolerance")
    values, vectors = np.linalg.eigh((h + h.conj().T) / 2)
    return HermitianEigen(values=values, vectors=vectors)


def phase_normalize(vector: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the (first) largest-magnitude entry is real positive."""
    k = int(np.argmax(np.abs(vector)))
    if vector[k] == 0:
        return vector
    return vector * (abs(vector[k]) / vector[k])


def top_eigenvector(eigen: HermitianEigen) -> np.ndarray:
    return phase_normalize(eigen.vectors[:, -1])


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar unitary: QR of a Ginibre matrix with the R diagonal made real positive."""
    if n < 1:
        raise DimensionError(f"unitary size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def unitary_with_first_column(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
        raise DomainError(f"expected a unit vector, got norm {np.linalg.norm(x):.12g}")
    n = x.size
    q, r = np.linalg.qr(np.column_stack([x, np.eye(n)]))
    q[:, 0] = x  # q[:, 0] * r[0, 0] == x up to rounding
    return q
