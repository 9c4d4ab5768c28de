"""
Test numerical radius, support function and boundary sampling
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import DimensionError, DomainError
from services.linalg import random_unitary
from services.numrange import (
    boundary_points,
    hermitian_part_at_angle,
    is_disk_centered,
    lemma_normal_form,
    normal_form_defect,
    numerical_radius,
    range_contains,
    support_function,
)
from utils.sampling import ginibre, random_density_matrix, random_hermitian, random_unit_vector

X = np.array([[0, 2, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
J = np.array([[0, 1], [0, 0]], dtype=complex)


def grid_oracle(a, count=10_000):
    thetas = 2 * np.pi * np.arange(count) / count
    rotated = np.exp(1j * thetas)[:, None, None] * a
    parts = (rotated + np.conj(np.swapaxes(rotated, 1, 2))) / 2
    return np.linalg.eigvalsh(parts)[:, -1].max()


def rayleigh_sample(a, count, rng):
    x = rng.standard_normal((count, a.shape[0])) + 1j * rng.standard_normal((count, a.shape[0]))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return np.abs(np.einsum("ki,ij,kj->k", x.conj(), a, x)).max()


def test_radius_of_gap_products():
    assert math.isclose(numerical_radius(np.kron(X, X)).radius, math.sqrt(4.25), abs_tol=1e-8)
    assert math.isclose(numerical_radius(np.kron(X, X.T)).radius, 2.0, abs_tol=1e-8)
    assert math.isclose(numerical_radius(np.kron(X.T, X)).radius, 2.0, abs_tol=1e-8)


def test_radius_of_nilpotent_jordan_block():
    assert math.isclose(numerical_radius(J).radius, 0.5, abs_tol=1e-12)


def test_radius_of_zero_matrix():
    result = numerical_radius(np.zeros((3, 3)))
    assert result.radius == 0.0
    assert result.theta_star == 0.0
    assert_allclose(result.attaining_vector, [1, 0, 0])


@pytest.mark.parametrize(
    "a, expected",
    [
        (np.diag([1.0, -3.0]), 3.0),
        (np.diag([1j, 2.0]), 2.0),
        (np.array([[5.0]]), 5.0),
    ],
)
def test_radius_of_normal_matrices(a, expected):
    assert math.isclose(numerical_radius(a).radius, expected, abs_tol=1e-10)


def test_attaining_vector_attains_radius():
    a = ginibre(4, np.random.default_rng(5))
    result = numerical_radius(a)
    x = result.attaining_vector
    assert math.isclose(np.linalg.norm(x), 1.0, abs_tol=1e-12)
    assert math.isclose(abs(np.vdot(x, a @ x)), result.radius, abs_tol=1e-8)


def test_radius_rejects_bad_input():
    with pytest.raises(DimensionError):
        numerical_radius(np.ones((2, 3)))
    with pytest.raises(DomainError):
        numerical_radius(J, tol=1e-13)


def test_radius_matches_angle_grid_and_dominates_rayleigh_samples():
    rng = np.random.default_rng(2024)
    for seed in range(100):
        n = 1 + seed % 3
        a = ginibre(n, np.random.default_rng(seed))
        w = numerical_radius(a).radius
        assert abs(w - grid_oracle(a)) <= 1e-6
        assert w >= rayleigh_sample(a, 100_000, rng) - 1e-6


def test_radius_is_invariant_under_unitary_similarity():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = 2 + seed % 8
        a = ginibre(n, rng)
        u = random_unitary(n, rng)
        assert abs(numerical_radius(u @ a @ u.conj().T).radius - numerical_radius(a).radius) <= 1e-8


def test_radius_is_invariant_under_transpose():
    for seed in range(100):
        a = ginibre(3, np.random.default_rng(seed))
        assert abs(numerical_radius(a.T).radius - numerical_radius(a).radius) <= 1e-8


def test_radius_is_absolutely_homogeneous():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        a = ginibre(3, rng)
        c = complex(*rng.standard_normal(2))
        assert abs(numerical_radius(c * a).radius - abs(c) * numerical_radius(a).radius) <= 1e-8


def test_transposing_a_two_by_two_factor_keeps_the_radius():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        a, b = ginibre(2, rng), ginibre(3, rng)
        assert abs(numerical_radius(np.kron(a, b)).radius - numerical_radius(np.kron(a.T, b)).radius) <= 1e-8


def test_hermitian_part_at_angle():
    a = ginibre(3, np.random.default_rng(1))
    h = hermitian_part_at_angle(a, 0.7)
    expected = (np.exp(0.7j) * a + np.exp(-0.7j) * a.conj().T) / 2
    assert_allclose(h, expected, atol=1e-15)
    assert_allclose(h, h.conj().T, atol=0)


def test_hermitian_part_at_angle_examples():
    assert_allclose(hermitian_part_at_angle(1j * np.eye(2), -np.pi / 2), np.eye(2), atol=1e-15)
    for theta in (0.0, 0.4, 2.0, -3.0):
        assert_allclose(np.linalg.eigvalsh(hermitian_part_at_angle(J, theta)), [-0.5, 0.5], atol=1e-15)
    h = random_hermitian(3, np.random.default_rng(2))
    assert_allclose(hermitian_part_at_angle(h, 0.0), h, atol=1e-15)


def test_support_function_is_attained_by_boundary_witnesses():
    a = ginibre(4, np.random.default_rng(9))
    points = boundary_points(a, 36)
    thetas = np.array([p.angle for p in points])
    witnesses = np.array([p.witness for p in points])
    assert_allclose(support_function(a, thetas), [p.support_value for p in points], atol=1e-12)
    assert_allclose(np.real(np.exp(1j * thetas) * witnesses), support_function(a, thetas), atol=1e-10)


def test_boundary_of_hermitian_matrix_is_real():
    a = random_hermitian(4, np.random.default_rng(0))
    assert all(abs(p.witness.imag) <= 1e-9 for p in boundary_points(a, 50))


def test_boundary_of_jordan_block_is_a_circle():
    points = boundary_points(J, 360)
    assert len(points) == 360
    assert_allclose([abs(p.witness) for p in points], 0.5, atol=1e-8)


def test_boundary_needs_three_angles():
    with pytest.raises(DomainError):
        boundary_points(J, 2)


def test_range_contains_disk():
    assert range_contains(J, 0)
    assert range_contains(J, 0.5 * (1 - 1e-6) * np.exp(0.3j))
    assert not range_contains(J, 0.5 * (1 + 1e-6) * np.exp(0.3j))
    assert not range_contains(J, 1.0)


def test_range_contains_sampled_values():
    for seed in range(50):
        rng = np.random.default_rng(seed)
        a = ginibre(4, rng)
        u = random_unit_vector(4, rng)
        assert range_contains(a, np.vdot(u, a @ u))
        assert range_contains(a, np.trace(a @ random_density_matrix(4, rng)))


def test_range_excludes_points_beyond_the_radius():
    a = ginibre(3, np.random.default_rng(21))
    result = numerical_radius(a)
    farthest = result.radius * np.exp(-1j * result.theta_star)
    assert range_contains(a, farthest)
    assert not range_contains(a, farthest * (1 + 1e-6))


def test_range_is_convex():
    rng = np.random.default_rng(4)
    a = ginibre(3, rng)
    witnesses = [p.witness for p in boundary_points(a, 60)]
    assert all(range_contains(a, w) for w in witnesses)
    for _ in range(20):
        i, j = rng.integers(len(witnesses), size=2)
        assert range_contains(a, (witnesses[i] + witnesses[j]) / 2)


@pytest.mark.parametrize(
    "a, expected",
    [
        (J, True),
        (np.kron(X, X), True),
        (np.kron(X, X.T), True),
        (np.diag([1.0, 2.0]), False),
    ],
)
def test_is_disk_centered(a, expected):
    assert is_disk_centered(a) is expected


def test_lemma_normal_form_relations():
    for seed in range(50):
        n = 2 + seed % 3
        a = ginibre(n, np.random.default_rng(seed))
        a = a / numerical_radius(a).radius
        x = numerical_radius(a).attaining_vector
        u, m = lemma_normal_form(a, x)
        assert_allclose(u[:, 0], x, atol=1e-15)
        assert normal_form_defect(m) <= 1e-7


def test_lemma_normal_form_examples():
    e1 = np.array([1.0, 0.0])
    _, m = lemma_normal_form(np.diag([1.0, 0.0]), e1)
    assert_allclose(m, np.diag([1.0, 0.0]), atol=1e-15)
    _, m = lemma_normal_form(np.diag([1.0, 1j]), e1)
    assert_allclose(m, np.diag([1.0, 1j]), atol=1e-15)
    assert abs(m[0, 1]) <= 1e-15 and abs(m[1, 0]) <= 1e-15


def test_lemma_normal_form_of_conjugated_matrix():
    planted = np.array([[1.0, 0.3], [-0.3, 0.5j]])
    for seed in range(10):
        u = random_unitary(2, seed)
        a = u @ planted @ u.conj().T
        a = a / numerical_radius(a).radius
        x = numerical_radius(a).attaining_vector
        _, m = lemma_normal_form(a, x)
        assert normal_form_defect(m) <= 1e-7


def test_lemma_normal_form_preconditions():
    with pytest.raises(DomainError):
        lemma_normal_form(J, np.array([1.0, 1.0]) / math.sqrt(2))
    with pytest.raises(DomainError):
        lemma_normal_form(2 * J, np.array([1.0, 0.0]))
    with pytest.raises(DimensionError):
        lemma_normal_form(2 * J, np.array([1.0, 0.0, 0.0]))
