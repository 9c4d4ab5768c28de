import logging
from typing import List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from config import ANGLE_GRID, MAX_DIM, RADIUS_TOL, REFINE_CANDIDATES, STRUCTURE_TOL
from errors import DimensionError, DomainError
from schemas.models import BoundaryPoint, RadiusResult
from services.linalg import as_matrix, hermitian_eigen, require_square, top_eigenvector, unitary_with_first_column

logger = logging.getLogger(__name__)

# Upper bound on complex entries held by one stacked eigen-solve
_BATCH_ELEMENTS = 1 << 22


def _operator(a) -> np.ndarray:
    a = as_matrix(a)
    require_square(a)
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"matrix size {a.shape[0]} exceeds the supported maximum {MAX_DIM}")
    return a


def _angle_grid(count: int) -> np.ndarray:
    return 2 * np.pi * np.arange(count) / count


def _hermitian_parts(a: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    rotated = np.exp(1j * thetas)[:, None, None] * a[None, :, :]
    return (rotated + np.conj(np.swapaxes(rotated, 1, 2))) / 2


def _chunks(a: np.ndarray, thetas: np.ndarray):
    size = max(1, _BATCH_ELEMENTS // a.size)
    for start in range(0, len(thetas), size):
        yield thetas[start:start + size]


def hermitian_part_at_angle(a, theta: float) -> np.ndarray:
    """H(theta) = (e^{i theta} A + e^{-i theta} A*) / 2."""
    a = as_matrix(a)
    require_square(a)
    rotated = np.exp(1j * theta) * a
    return (rotated + rotated.conj().T) / 2


def support_function(a, thetas) -> np.ndarray:
    """lambda_max(H(theta)) for every angle; the support function of W(A)."""
    a = _operator(a)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    return np.concatenate([
        np.linalg.eigvalsh(_hermitian_parts(a, chunk))[:, -1] for chunk in _chunks(a, thetas)
    ])


def _support_at(a: np.ndarray, theta: float) -> float:
    rotated = np.exp(1j * theta) * a
    return float(np.linalg.eigvalsh((rotated + rotated.conj().T) / 2)[-1])


def numerical_radius(a, tol: float = RADIUS_TOL) -> RadiusResult:
    """w(A) as the maximum over theta of lambda_max(H(theta)).

    A coarse scan over the angle grid picks the best few local maxima, each of
    which is refined by bounded Brent search inside its grid bracket.
    """
    a = _operator(a)
    if tol < 1e-12:
        raise DomainError(f"tolerance must be >= 1e-12, got {tol}")
    n = a.shape[0]
    if not np.any(a):
        e1 = np.zeros(n, dtype=np.complex128)
        e1[0] = 1.0
        return RadiusResult(radius=0.0, theta_star=0.0, attaining_vector=e1)

    grid = _angle_grid(ANGLE_GRID)
    step = grid[1]
    values = support_function(a, grid)
    peaks = np.flatnonzero((values >= np.roll(values, 1)) & (values >= np.roll(values, -1)))
    peaks = peaks[np.argsort(values[peaks], kind="stable")[::-1][:REFINE_CANDIDATES]]

    best_theta, best_value = grid[peaks[0]], values[peaks[0]]
    for k in peaks:
        center = grid[k]
        # optimise the offset from the grid point so the absolute tolerance stays tight
        result = minimize_scalar(
            lambda d: -_support_at(a, center + d),
            bounds=(-step, step),
            method="bounded",
            options={"xatol": tol},
        )
        if -result.fun > best_value:
            best_theta, best_value = center + result.x, -result.fun

    theta_star = float(np.mod(best_theta, 2 * np.pi))
    eigen = hermitian_eigen(hermitian_part_at_angle(a, theta_star))
    radius = max(float(eigen.values[-1]), 0.0)
    logger.debug(f"numerical radius {radius:.17g} at theta {theta_star:.6f} (n={n})")
    return RadiusResult(radius=radius, theta_star=theta_star, attaining_vector=top_eigenvector(eigen))


def boundary_points(a, count: int) -> List[BoundaryPoint]:
    """Support points of W(A) at `count` equispaced angles."""
    a = _operator(a)
    if count < 3:
        raise DomainError(f"count must be >= 3, got {count}")
    thetas = _angle_grid(count)
    points = []
    for chunk in _chunks(a, thetas):
        values, vectors = np.linalg.eigh(_hermitian_parts(a, chunk))
        for theta, value, basis in zip(chunk, values, vectors):
            x = basis[:, -1]
            points.append(BoundaryPoint(
                angle=float(theta),
                support_value=float(value[-1]),
                witness=complex(np.vdot(x, a @ x)),
            ))
    return points


def range_contains(a, z: complex, tol: float = STRUCTURE_TOL) -> bool:
    """Half-plane test Re(e^{i theta} z) <= lambda_max(H(theta)) + tol.

    Uses the default angle grid plus the direction of z, then refines the
    tightest constraint locally.
    """
    a = _operator(a)
    z = complex(z)
    thetas = _angle_grid(ANGLE_GRID)
    if z != 0:
        thetas = np.append(thetas, -np.angle(z))
    slack = support_function(a, thetas) - np.real(np.exp(1j * thetas) * z)
    k = int(np.argmin(slack))
    if slack[k] < -tol:
        return False
    center = thetas[k]
    result = minimize_scalar(
        lambda d: _support_at(a, center + d) - np.real(np.exp(1j * (center + d)) * z),
        bounds=(-2 * np.pi / ANGLE_GRID, 2 * np.pi / ANGLE_GRID),
        method="bounded",
    )
    return bool(min(slack[k], result.fun) >= -tol)


def is_disk_centered(a, count: int = 360, tol: float = 1e-6) -> bool:
    """Numerical check that W(A) is a circular disk centred at the origin."""
    points = boundary_points(a, count)
    support = np.array([p.support_value for p in points])
    moduli = np.abs([p.witness for p in points])
    return bool(np.ptp(support) <= tol and np.ptp(moduli) <= tol)


def normal_form_defect(m: np.ndarray) -> float:
    """Max deviation of M[0,0] = 1 and M[0,k] = -conj(M[k,0])."""
    return float(max(abs(m[0, 0] - 1.0), np.max(np.abs(m[0, 1:] + np.conj(m[1:, 0])), initial=0.0)))


def lemma_normal_form(a, x, tol: float = STRUCTURE_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """U with first column x and M = (x*Ax)^{-1} U*AU, for w(A) = |x*Ax| = 1."""
    a = _operator(a)
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.size != a.shape[0]:
        raise DimensionError(f"vector length {x.size} does not match matrix size {a.shape[0]}")
    radius = numerical_radius(a).radius
    if abs(radius - 1.0) > tol:
        raise DomainError(f"numerical radius must be 1, got {radius:.12g}")
    value = complex(np.vdot(x, a @ x))
    if abs(abs(value) - 1.0) > tol:
        raise DomainError(f"x does not attain the numerical radius: |x*Ax| = {abs(value):.12g}")

    u = unitary_with_first_column(x)
    m = (u.conj().T @ a @ u) / value
    defect = normal_form_defect(m)
    if defect > 1e-7:
        logger.warning(f"normal form relations hold only to {defect:.3e}")
    return u, m
