import numpy as np
import pytest

from gl11.algebra.dense import lu_determinant
from gl11.algebra.graded import GradedOperator, commutator, super_permutation, super_tensor
from gl11.errors import DomainError, StructureError
from gl11.model.matrices import V, boundary_generator, grassmann_body, k_minus, k_plus, r_matrix
from gl11.model.types import (
    GRASSMANN,
    Boundary,
    ModelParameters,
    hermitian_preset,
    random_parameters,
    random_theta,
)


def test_defaults() -> None:
    p = ModelParameters(n=3)
    assert p.theta == (0j, 0j, 0j)
    assert p.is_homogeneous()
    assert not p.is_open
    assert isinstance(p.eta, complex)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 0},
        {"n": 2, "theta": (0.1,)},
        {"n": 2, "eta": 0},
    ],
)
def test_invalid_parameters(kwargs: dict) -> None:
    with pytest.raises(DomainError):
        ModelParameters(**kwargs)


def test_non_generic_inhomogeneities() -> None:
    p = ModelParameters(n=2, theta=(0.3, 1.3))
    with pytest.raises(DomainError):
        p.check_generic()
    ModelParameters(n=2, theta=(0.3, 0.71 + 0.2j)).check_generic()


def test_open_normalization_zeros() -> None:
    p = ModelParameters(n=2, theta=(0.5, 0.2 + 0.3j), boundary=Boundary.OPEN)
    with pytest.raises(DomainError):
        p.check_open_generic()


def test_random_draws_are_generic_and_seeded() -> None:
    p = random_parameters(3, np.random.default_rng(11), boundary=Boundary.OPEN)
    p.check_open_generic()
    assert random_theta(4, np.random.default_rng(5)) == random_theta(4, np.random.default_rng(5))


def test_hermitian_preset() -> None:
    p = hermitian_preset(3, b_minus=0.4 + 0.3j)
    assert p.is_open
    assert p.is_hermitian()
    assert not p.with_grassmann(1j, 1, 1, 1).is_hermitian()


def test_r_determinant() -> None:
    eta = 0.7 - 0.2j
    for u in (0.3, 1.1 + 0.4j):
        det = lu_determinant(r_matrix(u, eta))
        assert det == pytest.approx((u + eta) ** 2 * (u - eta) ** 2)


def test_r_at_eta_is_twice_symmetrizer() -> None:
    eta = 1.0
    swap = super_permutation(V)
    r = r_matrix(eta, eta)
    np.testing.assert_allclose(r.entries, eta * (np.eye(4) + swap.entries))


def test_k_matrices_need_open_chain() -> None:
    with pytest.raises(DomainError):
        k_minus(0.4, ModelParameters(n=2))


def test_boundary_sign() -> None:
    with pytest.raises(DomainError):
        boundary_generator(ModelParameters(n=2, boundary=Boundary.OPEN), 0)


def test_k_body() -> None:
    p = ModelParameters(n=2, boundary=Boundary.OPEN, a_minus=1.2, a_plus=0.5)
    u = 0.6
    np.testing.assert_allclose(grassmann_body(k_minus(u, p)).entries, np.diag([1 + u * 1.2, 1 - u * 1.2]))
    np.testing.assert_allclose(grassmann_body(k_plus(u, p)).entries, np.diag([1 + u * 0.5, 1 - u * 0.5]))


def test_k_soul_sits_below_the_diagonal() -> None:
    p = ModelParameters(n=2, boundary=Boundary.OPEN)
    k = k_minus(0.6, p)
    blocks = k.entries.reshape(2, 2, 2, 2)
    assert np.abs(blocks[0, :, 1, :]).max() == 0
    assert np.abs(blocks[1, :, 0, :]).max() > 0


def test_grassmann_generator() -> None:
    e = GRASSMANN.generator
    assert (e @ e).norm() == 0
    assert not e.is_even()


def test_body_rejects_upper_block() -> None:
    e = np.zeros((2, 2), dtype=complex)
    e[0, 1] = 1.0
    upper = super_tensor(GradedOperator.on(V, e), GradedOperator.identity(V))
    with pytest.raises(StructureError):
        grassmann_body(upper)


def test_k_matrices_do_not_commute() -> None:
    p = ModelParameters(
        n=2, boundary=Boundary.OPEN, a_minus=1.2, a_plus=0.5, b_minus=1, b_plus=1, f_minus=1, f_plus=1
    )
    assert commutator(k_minus(0.3, p), k_plus(0.7, p)).norm() > 1e-3
    assert commutator(k_minus(0.3, p.body_only()), k_plus(0.7, p.body_only())).norm() < 1e-15
