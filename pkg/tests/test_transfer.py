import numpy as np
import pytest

from gl11.algebra.graded import commutator, relative_residual, super_permutation
from gl11.config import PRESETS
from gl11.errors import DomainError
from gl11.model.matrices import V
from gl11.model.types import Boundary, ModelParameters
from gl11.transfer.hamiltonian import body_hamiltonian, check_hamiltonian, hamiltonian
from gl11.transfer.monodromy import Aux, monodromy, open_chain, periodic_chain
from gl11.transfer.transfer import transfer, transfer_family


def test_single_site_transfer_is_scalar() -> None:
    p = ModelParameters(n=1, eta=0.8 + 0.3j)
    for u in (0.0, 0.4, -1.2 + 0.5j):
        np.testing.assert_allclose(transfer(p, Aux.BASE, u).entries, p.eta * np.eye(2), atol=1e-14)


def test_chain_layout() -> None:
    p = ModelParameters(n=2)
    assert periodic_chain(p, Aux.BAR).factors == ((0, 1), (0, 1), (0, 1))
    assert open_chain(p, Aux.BAR_PRIME).factors[1] == (1, 0)
    assert monodromy(p, Aux.BASE, 0.3).domain.dim == 8


def test_periodic_transfer_commutes() -> None:
    p = ModelParameters(n=3, eta=1.0, theta=(0.1, -0.25 + 0.2j, 0.37j))
    x, y = transfer(p, Aux.BASE, 0.3 + 0.1j), transfer(p, Aux.BASE, -0.8)
    assert commutator(x, y).norm() < 1e-12 * x.norm() * y.norm()


def test_open_transfer_acts_on_grassmann_and_sites() -> None:
    p = ModelParameters(n=2, boundary=Boundary.OPEN)
    t = transfer(p, Aux.BASE, 0.45)
    assert t.domain.factors == ((0, 1),) * 3
    assert transfer(p, Aux.BASE, 0.0).norm() < 1e-12 * t.norm()


def test_family_degrees() -> None:
    assert transfer_family(ModelParameters(n=3)).degree_bound == 2
    assert transfer_family(ModelParameters(n=3, boundary=Boundary.OPEN)).degree_bound == 8


def test_two_site_hamiltonian() -> None:
    h = hamiltonian(ModelParameters(n=2))
    np.testing.assert_allclose(h.entries, 2 * super_permutation(V).entries)


def test_hamiltonian_needs_two_sites() -> None:
    with pytest.raises(DomainError):
        hamiltonian(ModelParameters(n=1))


def test_periodic_spectrum() -> None:
    h = hamiltonian(ModelParameters(n=3))
    energies = np.sort(np.linalg.eigvals(h.entries).real)
    np.testing.assert_allclose(energies, [-3, -3, 0, 0, 0, 0, 3, 3], atol=1e-10)


def test_open_body_spectrum() -> None:
    h = body_hamiltonian(PRESETS["table3"].model)
    energies = np.sort(np.linalg.eigvals(h.entries).real)
    expected = [-2.7667, -2.3777, -0.9800, -0.5911, 0.5911, 0.9800, 2.3777, 2.7667]
    np.testing.assert_allclose(energies, expected, atol=1e-3)


@pytest.mark.parametrize(
    "p",
    [
        ModelParameters(n=3, eta=0.9 + 0.2j),
        ModelParameters(n=2, boundary=Boundary.OPEN, a_plus=0.3, a_minus=-0.7),
    ],
)
def test_hamiltonian_from_transfer(p: ModelParameters) -> None:
    check = check_hamiltonian(p)
    assert check.passed, check


def test_open_hamiltonian_body() -> None:
    h = hamiltonian(ModelParameters(n=2, boundary=Boundary.OPEN))
    body = body_hamiltonian(ModelParameters(n=2, boundary=Boundary.OPEN))
    assert h.domain.dim == 8
    assert body.domain.dim == 4
    assert relative_residual(body, body.dagger()) < 1e-14
