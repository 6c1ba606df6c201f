import numpy as np
import pytest

from gl11.algebra.dense import (
    PolySamples,
    circle_nodes,
    evaluate,
    integer_nodes,
    interpolate,
    interpolation_residual,
    lu_determinant,
    lu_solve,
)
from gl11.errors import DomainError


def test_determinant_matches_numpy() -> None:
    rng = np.random.default_rng(7)
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert lu_determinant(m) == pytest.approx(complex(np.linalg.det(m)), rel=1e-10)


def test_determinant_of_singular_matrix() -> None:
    m = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
    assert abs(lu_determinant(m)) < 1e-12
    assert lu_determinant(np.zeros((0, 0))) == 1


def test_solve() -> None:
    rng = np.random.default_rng(3)
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    x = rng.normal(size=(5, 2)) + 0j
    np.testing.assert_allclose(lu_solve(m, m @ x), x, atol=1e-10)


def test_solve_singular() -> None:
    with pytest.raises(DomainError):
        lu_solve(np.zeros((3, 3)), np.ones(3))


def test_interpolation_recovers_coefficients() -> None:
    coeffs = np.array([1.0, -2.0 + 1j, 0.5, 3.0])
    nodes = circle_nodes(4, radius=1.5)
    samples = PolySamples(nodes, [complex(evaluate(coeffs, u)) for u in nodes], 3)
    got = interpolate(samples)
    np.testing.assert_allclose(got, coeffs, atol=1e-12)
    assert interpolation_residual(samples, got) < 1e-12


def test_interpolation_of_matrices() -> None:
    a, b = np.eye(2), np.array([[0.0, 1.0], [2.0, 0.0]])
    nodes, _ = integer_nodes(2)
    coeffs = interpolate(PolySamples(nodes, [a + u * b for u in nodes], 1))  # type: ignore[arg-type]
    np.testing.assert_allclose(coeffs[0], a, atol=1e-12)
    np.testing.assert_allclose(coeffs[1], b, atol=1e-12)


def test_too_few_nodes() -> None:
    with pytest.raises(DomainError):
        interpolate(PolySamples([0.1, 0.2], [1.0, 2.0], 2))


def test_duplicate_nodes() -> None:
    with pytest.raises(DomainError):
        interpolate(PolySamples([0.1, 0.1], [1.0, 2.0], 1))


def test_integer_nodes_avoid_degenerate_points() -> None:
    nodes, shift = integer_nodes(3, avoid=[1.37])
    assert shift != pytest.approx(0.37)
    assert all(abs(n - 1.37) > 1e-6 for n in nodes)
    assert nodes[1] - nodes[0] == pytest.approx(1.0)


def test_determinant_of_diagonal() -> None:
    assert lu_determinant(np.diag([2.0, 3j])) == pytest.approx(6j)
    assert lu_determinant(np.eye(4)) == 1
