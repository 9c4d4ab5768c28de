from typing import List, Sequence

import numpy as np

from services.linalg import random_unitary


def ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(n, rng)
    return (g + g.conj().T) / 2


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_density_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """V diag(p) V* with V Haar and p uniform on the probability simplex."""
    p = rng.dirichlet(np.ones(n))
    v = random_unitary(n, rng)
    return (v * p) @ v.conj().T


def ginibre_factors(dims: Sequence[int], rng: np.random.Generator) -> List[np.ndarray]:
    return [ginibre(n, rng) for n in dims]


def hermitian_factors(dims: Sequence[int], rng: np.random.Generator) -> List[np.ndarray]:
    return [random_hermitian(n, rng) for n in dims]
