import numpy as np
import pytest

from gl11.algebra.graded import relative_residual
from gl11.errors import DomainError, StructureError
from gl11.fusion.checks import verify_fusion, verify_rk
from gl11.fusion.fused import Sign, clear_caches, fuse_k, fuse_r, fused_k, fused_k_coefficients, projector
from gl11.fusion.projectors import ProjectorKind, build_projector
from gl11.model.types import Boundary, ModelParameters, random_parameters


@pytest.mark.parametrize("kind", list(ProjectorKind))
def test_projector_degeneracy(kind: ProjectorKind) -> None:
    proj = projector(kind, 0.9 + 0.2j)
    op = proj.operator
    assert proj.rank == 2
    assert relative_residual(op @ op, op) < 1e-14


def test_projectors_are_complementary() -> None:
    plus = build_projector(ProjectorKind.P_PLUS).operator
    minus = build_projector(ProjectorKind.P_MINUS).operator
    np.testing.assert_allclose((plus + minus).entries, np.eye(4), atol=1e-15)


def test_fused_r_is_linear() -> None:
    eta = 1.1 - 0.3j
    a, b, c = fuse_r(1, 1, 0.2, eta), fuse_r(1, 1, 0.7, eta), fuse_r(1, 1, 1.2, eta)
    assert relative_residual(a + c, 2 * b) < 1e-12


def test_tilde_levels_coincide() -> None:
    eta = 0.8
    for u in (0.13, -0.6 + 0.4j):
        assert relative_residual(fuse_r(1, 2, u, eta), fuse_r(2, 2, u, eta)) < 1e-10


def test_fused_k_through_normalization_zero() -> None:
    p = ModelParameters(n=2, boundary=Boundary.OPEN)
    u = -0.5 * p.eta
    with pytest.raises(DomainError):
        fuse_k(1, 1, Sign.MINUS, u, p)
    left, right = fused_k(1, 1, Sign.MINUS, u - 0.3, p), fused_k(1, 1, Sign.MINUS, u + 0.3, p)
    assert relative_residual(fused_k(1, 1, Sign.MINUS, u, p), (left + right) / 2) < 1e-12
    assert relative_residual(fused_k(1, 1, Sign.MINUS, 0.41, p), fuse_k(1, 1, Sign.MINUS, 0.41, p)) < 1e-10


def test_fused_k_needs_open_chain() -> None:
    with pytest.raises(DomainError):
        fuse_k(1, 1, Sign.PLUS, 0.3, ModelParameters(n=2))


def test_rk_identities_periodic(rng: np.random.Generator) -> None:
    checks = verify_rk(ModelParameters(n=2, eta=0.9 + 0.1j), rng)
    assert {c.family for c in checks} == {"r-matrix"}
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_rk_identities_open(rng: np.random.Generator) -> None:
    p = random_parameters(2, rng, boundary=Boundary.OPEN)
    checks = verify_rk(p, rng)
    families = {c.family for c in checks}
    assert {"r-matrix", "k-matrix", "grassmann"} <= families
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_fusion_hierarchy_open(rng: np.random.Generator) -> None:
    p = random_parameters(2, rng, boundary=Boundary.OPEN)
    checks = verify_fusion(p, rng, trials=2)
    assert any(c.family == "fused-k" for c in checks)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_fusion_hierarchy_periodic(rng: np.random.Generator) -> None:
    checks = verify_fusion(ModelParameters(n=1), rng, trials=2)
    assert not any(c.family == "fused-k" for c in checks)
    assert all(c.passed for c in checks)


@pytest.mark.usefixtures("flat_signs")
def test_ungraded_signs_break_the_symmetrizer() -> None:
    with pytest.raises(StructureError):
        projector(ProjectorKind.P_PLUS, 1.0)


def test_first_level_fused_r_closed_form() -> None:
    eta, u = 0.9 + 0.2j, 0.37 - 0.14j
    expected = np.diag([u + 1.5 * eta, u - 0.5 * eta, u + 0.5 * eta, u - 1.5 * eta])
    expected[1, 2] = expected[2, 1] = np.sqrt(2) * eta
    np.testing.assert_allclose(fuse_r(1, 1, u, eta).entries, expected, atol=1e-12)


def test_second_level_fused_r_closed_form() -> None:
    eta, u = 0.9 + 0.2j, 0.37 - 0.14j
    expected = np.diag([u + 2 * eta, u - eta, u + eta, u - 2 * eta])
    expected[1, 2] = expected[2, 1] = -np.sqrt(3) * eta
    np.testing.assert_allclose(fuse_r(1, 2, u, eta).entries, expected, atol=1e-12)


def test_symmetrizer_fixes_psi2() -> None:
    psi2 = np.array([0, 1, 1, 0]) / np.sqrt(2)
    plus = build_projector(ProjectorKind.P_PLUS).operator.entries
    minus = build_projector(ProjectorKind.P_MINUS).operator.entries
    np.testing.assert_allclose(plus @ psi2, psi2, atol=1e-15)
    np.testing.assert_allclose(minus @ psi2, np.zeros(4), atol=1e-15)
    phi1 = np.array([0, np.sqrt(2), -1, 0]) / np.sqrt(3)
    pp_minus = build_projector(ProjectorKind.PP_MINUS).operator.entries
    np.testing.assert_allclose(pp_minus @ phi1, phi1, atol=1e-15)


@pytest.mark.parametrize("seed, eta", list(enumerate([1.0, 0.9 + 0.1j, 1.3 - 0.25j, 0.7 + 0.6j, 1.1])))
def test_gybe_over_many_points(seed: int, eta: complex) -> None:
    checks = verify_rk(ModelParameters(n=2, eta=eta), np.random.default_rng(seed), tolerance=1e-11, trials=20)
    assert sum(c.name.startswith("gybe-") for c in checks) == 20
    assert all(c.passed for c in checks), [(c.name, c.residual) for c in checks if not c.passed]


def test_fused_k_cache_is_bounded() -> None:
    rng = np.random.default_rng(11)
    for _ in range(70):
        fused_k(1, 1, Sign.MINUS, 0.41, random_parameters(2, rng, Boundary.OPEN))
    assert fused_k_coefficients.cache_info().currsize <= 64
    clear_caches()
    assert fused_k_coefficients.cache_info().currsize == 0
