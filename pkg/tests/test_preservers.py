"""
Test superoperators, partial transposes and canonical preserver maps
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from errors import DimensionError, DomainError
from schemas.models import CanonicalPreserver, FactorType, TensorDims
from services.linalg import kron_all, matrix_unit, random_unitary
from services.numrange import numerical_radius
from services.preservers import (
    apply,
    canonical_on_product,
    canonical_to_superop,
    compose_canonical,
    conjugation_superop,
    factor_transpose,
    identity_superop,
    partial_transpose_superop,
    random_canonical,
    scaled_identity_superop,
    superop_from_function,
)
from utils.sampling import ginibre, ginibre_factors

I, T = FactorType.IDENTITY, FactorType.TRANSPOSE
X = np.array([[0, 2, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
DIMS = [(2, 2), (2, 3), (3, 3), (2, 2, 2)]


def canonical(dims, xi=1.0, unitary=None, types=None):
    dims = TensorDims(dims=list(dims))
    unitary = np.eye(dims.total) if unitary is None else unitary
    types = [I] * dims.count if types is None else types
    return CanonicalPreserver(dims=dims, xi=complex(xi), unitary=unitary.astype(complex), factor_types=types)


def test_identity_function_gives_identity_superop():
    phi = superop_from_function([2, 2], lambda x: x)
    assert_array_equal(phi.matrix, np.eye(16))
    assert_array_equal(phi.matrix, identity_superop([2, 2]).matrix)


def test_transpose_on_two_by_two_is_the_swap():
    phi = superop_from_function([2], lambda x: x.T)
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert_array_equal(phi.matrix, swap)
    assert_array_equal(apply(phi, matrix_unit(2, 0, 1)), matrix_unit(2, 1, 0))


def test_conjugation_superop_matches_function():
    u = random_unitary(3, 0)
    phi = superop_from_function([3], lambda x: u @ x @ u.conj().T)
    assert_allclose(phi.matrix, conjugation_superop(u).matrix, atol=1e-12)
    for p in range(3):
        for q in range(3):
            e = matrix_unit(3, p, q)
            assert_allclose(apply(phi, e), u @ e @ u.conj().T, atol=1e-12)


def test_superop_from_function_checks():
    with pytest.raises(DomainError):
        superop_from_function([2], lambda x: x @ x)
    with pytest.raises(DimensionError):
        superop_from_function([3], lambda x: x[:2, :2])


def test_apply_checks_shape():
    with pytest.raises(DimensionError):
        apply(identity_superop([2, 2]), np.eye(3))


def test_scaled_identity():
    x = ginibre(4, np.random.default_rng(0))
    assert_allclose(apply(scaled_identity_superop([2, 2], 2j), x), 2j * x)


def test_factor_transpose_on_products():
    rng = np.random.default_rng(1)
    a, b, c = ginibre_factors([2, 3, 2], rng)
    product = kron_all([a, b, c])
    assert_allclose(factor_transpose(product, [2, 3, 2], [1]), kron_all([a, b.T, c]))
    assert_allclose(factor_transpose(product, [2, 3, 2], [0, 2]), kron_all([a.T, b, c.T]))
    assert_allclose(factor_transpose(product, [2, 3, 2], [0, 1, 2]), product.T)


def test_partial_transpose_full_subset_is_global_transpose():
    global_transpose = superop_from_function([2, 2], lambda x: x.T)
    assert_array_equal(partial_transpose_superop([2, 2], [0, 1]).matrix, global_transpose.matrix)


def test_partial_transpose_of_gap_product():
    phi = partial_transpose_superop([3, 3], [1])
    image = apply(phi, np.kron(X, X))
    assert_array_equal(image, np.kron(X, X.T))
    assert math.isclose(numerical_radius(image).radius, 2.0, abs_tol=1e-8)


def test_partial_transpose_is_an_involution():
    phi = partial_transpose_superop([2, 2], [0])
    assert_array_equal(phi.matrix @ phi.matrix, np.eye(16))


def test_partial_transpose_subset_checks():
    with pytest.raises(DomainError):
        partial_transpose_superop([2, 2], [])
    with pytest.raises(DimensionError):
        partial_transpose_superop([2, 2], [2])


def test_canonical_trivial_cases():
    assert_allclose(canonical_to_superop(canonical([2, 3])).matrix, np.eye(36))
    global_transpose = superop_from_function([2, 2], lambda x: x.T)
    assert_allclose(canonical_to_superop(canonical([2, 2], types=[T, T])).matrix, global_transpose.matrix)


def test_canonical_mixed_types_on_product():
    rng = np.random.default_rng(2)
    a, b = ginibre_factors([2, 3], rng)
    phi = canonical_to_superop(canonical([2, 3], types=[I, T]))
    assert_allclose(apply(phi, np.kron(a, b)), np.kron(a, b.T), atol=1e-12)


def test_canonical_with_phase_and_unitary():
    u = random_unitary(6, 3)
    phi = canonical_to_superop(canonical([2, 3], xi=1j, unitary=u))
    e = np.kron(matrix_unit(2, 0, 0), matrix_unit(3, 1, 1))
    assert_allclose(apply(phi, e), 1j * u @ e @ u.conj().T, atol=1e-12)


@pytest.mark.parametrize("dims", DIMS)
def test_canonical_superop_agrees_with_direct_evaluation(dims):
    preserver = random_canonical(dims, seed=sum(dims))
    phi = canonical_to_superop(preserver)
    rng = np.random.default_rng(0)
    for _ in range(10):
        factors = ginibre_factors(dims, rng)
        assert_allclose(apply(phi, kron_all(factors)), canonical_on_product(preserver, factors), atol=1e-10)


@pytest.mark.parametrize("dims", DIMS)
def test_canonical_maps_preserve_radius_on_products(dims):
    phi = canonical_to_superop(random_canonical(dims, seed=len(dims)))
    rng = np.random.default_rng(1)
    for _ in range(50):
        product = kron_all(ginibre_factors(dims, rng))
        assert abs(numerical_radius(apply(phi, product)).radius - numerical_radius(product).radius) <= 1e-7


def test_mixed_type_on_two_by_n_preserves_radius():
    phi = canonical_to_superop(canonical([2, 3], xi=np.exp(0.3j), unitary=random_unitary(6, 5), types=[T, I]))
    rng = np.random.default_rng(6)
    for _ in range(50):
        product = kron_all(ginibre_factors([2, 3], rng))
        assert abs(numerical_radius(apply(phi, product)).radius - numerical_radius(product).radius) <= 1e-7


def test_random_canonical_shares_type_on_large_factors():
    for seed in range(10):
        preserver = random_canonical([3, 2, 3], seed)
        assert preserver.factor_types[0] == preserver.factor_types[2]
        assert math.isclose(abs(preserver.xi), 1.0, abs_tol=1e-12)


def test_canonical_preserver_invariants():
    with pytest.raises(ValueError):
        canonical([2, 2], xi=1.1)
    with pytest.raises(ValueError):
        canonical([2, 2], unitary=2 * np.eye(4))
    with pytest.raises(ValueError):
        canonical([2, 2], types=[I])


@pytest.mark.parametrize(
    "outer, inner",
    [
        (random_canonical([2, 3], 1, [I, I]), random_canonical([2, 3], 2, [T, I])),
        (random_canonical([3, 3], 3, [T, T]), random_canonical([3, 3], 4, [I, T])),
        (random_canonical([2, 2, 2], 5, [T, I, T]), canonical([2, 2, 2], xi=1j, types=[T, T, I])),
    ],
)
def test_compose_canonical(outer, inner):
    composed = compose_canonical(outer, inner)
    rng = np.random.default_rng(7)
    for _ in range(5):
        factors = ginibre_factors(outer.dims.dims, rng)
        direct = apply(canonical_to_superop(outer), canonical_on_product(inner, factors))
        assert_allclose(canonical_on_product(composed, factors), direct, atol=1e-9)


def test_compose_canonical_rejects_non_canonical_composition():
    outer = random_canonical([2, 2], 1, [T, I])
    inner = random_canonical([2, 2], 2, [I, I])
    with pytest.raises(DomainError):
        compose_canonical(outer, inner)
    with pytest.raises(DimensionError):
        compose_canonical(outer, random_canonical([2, 3], 2))
