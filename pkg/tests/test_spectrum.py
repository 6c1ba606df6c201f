from pathlib import Path

import numpy as np
import pytest

from gl11.algebra.dense import lu_determinant
from gl11.config import PRESETS, Tolerances
from gl11.errors import DomainError
from gl11.model.types import Boundary, ModelParameters, hermitian_preset
from gl11.spectrum.aberth import aberth_roots, trim
from gl11.spectrum.bae import (
    BetheRootSet,
    enumerate_states,
    homogeneous_periodic_roots,
    open_bae_residual,
    solve_bae,
    solve_bae_open,
    solve_bae_periodic,
)
from gl11.spectrum.certify import (
    certify_spectrum,
    check_continuity,
    check_energies,
    follow_states,
    separated_residual,
    spectrum_lines,
    state_label,
    verify_tq_relations,
)
from gl11.spectrum.tq import energy, q_function, tq_lambda
from gl11.tables import GOLDEN_TABLE3, TABLES, ReferenceTable, compare_table, reproduce_table, reproduce_tables, spectrum_table
from gl11.transfer.monodromy import Aux


def _close(got: list, expected: list, tol: float) -> bool:
    remaining = list(got)
    for e in expected:
        distances = [abs(g - e) for g in remaining]
        if not distances or min(distances) > tol:
            return False
        remaining.pop(int(np.argmin(distances)))
    return not remaining


def test_aberth_real_roots() -> None:
    roots = aberth_roots([-6, 11, -6, 1])
    assert _close(roots, [1, 2, 3], 1e-10)


def test_aberth_complex_roots() -> None:
    expected = [0.3 + 1j, -1.2 - 0.4j, 2j, 0.7]
    coeffs = np.polynomial.polynomial.polyfromroots(expected)
    assert _close(aberth_roots(coeffs), expected, 1e-9)


def test_aberth_edge_cases() -> None:
    assert aberth_roots([5.0]) == []
    assert aberth_roots([2.0, 1.0, 0.0, 0.0]) == pytest.approx([-2.0])
    with pytest.raises(DomainError):
        aberth_roots([0.0, 0.0])


def test_trim() -> None:
    assert len(trim([1.0, 2.0, 1e-18], tol=1e-15)) == 2


def test_two_site_root() -> None:
    assert solve_bae_periodic(ModelParameters(n=2)) == pytest.approx([0.5])


def test_closed_form_roots() -> None:
    roots = solve_bae_periodic(ModelParameters(n=4, eta=0.7 + 0.2j))
    assert _close(roots, homogeneous_periodic_roots(4, 0.7 + 0.2j), 1e-9)


def test_inhomogeneous_periodic_roots() -> None:
    p = ModelParameters(n=3, theta=(0.1, -0.2 + 0.3j, 0.45j))
    roots = solve_bae_periodic(p)
    assert len(roots) == 2
    for mu in roots:
        lhs = np.prod([(mu - t - p.eta) for t in p.theta])
        rhs = np.prod([(mu - t) for t in p.theta])
        assert abs(lhs - rhs) < 1e-9 * max(abs(lhs), 1.0)


def test_open_roots_of_table3() -> None:
    p = PRESETS["table3"].model
    roots = solve_bae_open(p)
    assert _close(roots, [-0.5 - 1.5235j, -0.5 - 0.2187j, -0.5 - 0.5565j], 1e-4)
    assert all(open_bae_residual(p, lam) < 1e-9 for lam in roots)


def test_open_solver_needs_open_chain() -> None:
    with pytest.raises(DomainError):
        solve_bae_open(ModelParameters(n=2))


def test_state_enumeration() -> None:
    p = ModelParameters(n=3)
    states = enumerate_states(p, solve_bae(p))
    assert len(states) == 8
    assert sum(s.has_infinite_root for s in states) == 4
    assert len({s.key for s in states}) == 8
    open_states = enumerate_states(PRESETS["table3"].model, [0.1j, 0.2j, 0.3j])
    assert len(open_states) == 8
    assert not any(s.has_infinite_root for s in open_states)


def test_infinite_root_only_on_periodic_chains() -> None:
    with pytest.raises(DomainError):
        BetheRootSet(Boundary.OPEN, (), has_infinite_root=True)


def test_single_site_eigenvalue() -> None:
    p = ModelParameters(n=1, eta=0.6)
    for s in enumerate_states(p, solve_bae(p)):
        assert tq_lambda(s, p, Aux.BASE, 0.37) == pytest.approx(0.6)


def test_infinite_root_does_not_change_eigenvalues() -> None:
    p = ModelParameters(n=3)
    mu = tuple(solve_bae(p)[:1])
    finite = BetheRootSet(Boundary.PERIODIC, mu)
    with_inf = BetheRootSet(Boundary.PERIODIC, mu, has_infinite_root=True)
    assert tq_lambda(finite, p, Aux.BASE, 0.3) == tq_lambda(with_inf, p, Aux.BASE, 0.3)
    assert energy(finite, p) == energy(with_inf, p)


def test_fused_eigenvalues_come_in_pairs() -> None:
    p = ModelParameters(n=2, boundary=Boundary.OPEN)
    s = BetheRootSet(Boundary.OPEN, tuple(solve_bae(p)[:1]))
    u = 0.31 + 0.2j
    assert tq_lambda(s, p, Aux.BAR_PRIME, u) == pytest.approx(-tq_lambda(s, p, Aux.BAR, u))
    assert tq_lambda(s, p, Aux.TILDE, u) == tq_lambda(s, p, Aux.TILDE_PRIME, u)


def test_eigenvalue_at_a_root_is_rejected() -> None:
    p = ModelParameters(n=2)
    s = BetheRootSet(Boundary.PERIODIC, (0.5,))
    with pytest.raises(DomainError):
        tq_lambda(s, p, Aux.BASE, 0.5)
    with pytest.raises(DomainError):
        tq_lambda(BetheRootSet(Boundary.OPEN), p, Aux.BASE, 0.2)


def test_open_q_function_symmetry() -> None:
    p = ModelParameters(n=2, eta=0.8, boundary=Boundary.OPEN)
    s = BetheRootSet(Boundary.OPEN, (0.2 - 0.4j,))
    u = 0.33
    assert q_function(s, p, u) == pytest.approx(q_function(s, p, -u - p.eta))


def test_energies_need_homogeneous_chain() -> None:
    p = ModelParameters(n=2, theta=(0.1, 0.3j))
    with pytest.raises(DomainError):
        energy(BetheRootSet(Boundary.PERIODIC), p)
    with pytest.raises(DomainError):
        energy(BetheRootSet(Boundary.PERIODIC), ModelParameters(n=1))


def test_reference_energy_of_open_chain() -> None:
    p = PRESETS["table3"].model
    assert energy(BetheRootSet(Boundary.OPEN), p) == pytest.approx(0.5 * (5 + 1.2 - 1 / 1.5))


@pytest.mark.parametrize("reference", TABLES, ids=lambda reference: reference.name)
def test_reference_tables(reference: ReferenceTable) -> None:
    table, checks = reproduce_table(reference, Tolerances())
    assert len(table) == len(reference.golden)
    assert all(c.passed for c in checks), [c.note for c in checks if not c.passed]


def test_table_layout() -> None:
    p = PRESETS["table1"].model
    table = spectrum_table(p, spectrum_lines(p))
    assert list(table.columns) == ["mu_1", "mu_2", "mu_3", "E"]
    assert (table["mu_1"] == "inf").sum() == 4


def test_table_mismatch_is_reported() -> None:
    p = PRESETS["table3"].model
    lines = spectrum_lines(p)
    shifted = [(roots, e + 0.01) for roots, e in GOLDEN_TABLE3]
    checks = compare_table("table3", shifted, lines, 1e-4)
    assert not any(c.passed for c in checks)
    checks = compare_table("table3", GOLDEN_TABLE3[:-1], lines, 1e-4)
    assert [c.name for c in checks if not c.passed] == ["extra-rows"]


def test_reproduce_tables_writes_csv(tmp_path: Path) -> None:
    report = reproduce_tables(str(tmp_path))
    assert report.passed
    assert sorted(p.name for p in tmp_path.iterdir()) == ["table1.csv", "table2.csv", "table3.csv"]


def test_state_label() -> None:
    s = BetheRootSet(Boundary.PERIODIC, (0.5 + 0j,), has_infinite_root=True)
    assert state_label(s) == "{0.5+0i, inf}"


@pytest.mark.parametrize(
    "p",
    [
        ModelParameters(n=3),
        ModelParameters(n=4),
        ModelParameters(n=3, theta=(0.12, -0.3 + 0.21j, 0.4j)),
        PRESETS["table3"].model,
        ModelParameters(n=2, boundary=Boundary.OPEN, a_plus=0.4 + 0.1j, a_minus=-0.8),
        hermitian_preset(2, b_minus=0.3 + 0.2j),
    ],
)
def test_certify_spectrum(p: ModelParameters) -> None:
    report = certify_spectrum(p, seed=3)
    families = {c.family for c in report.checks}
    assert {"membership", "completeness", "tq-relation", "tq-degree"} <= families
    assert report.passed, [(c.family, c.name, c.residual) for c in report.failures()]


@pytest.mark.parametrize(
    "p",
    [ModelParameters(n=5), ModelParameters(n=6), ModelParameters(n=5, eta=0.9 + 0.2j)],
    ids=["n5", "n6", "n5-complex-eta"],
)
def test_certify_longer_periodic_chains(p: ModelParameters) -> None:
    report = certify_spectrum(p, seed=1)
    families = {c.family for c in report.checks}
    assert {"energy", "continuity"} <= families
    assert report.passed, [(c.family, c.name, c.residual) for c in report.failures()]


def test_zero_energies_are_certified() -> None:
    p = ModelParameters(n=6)
    lines = spectrum_lines(p)
    zero = [line for line in lines if line.energy is not None and abs(line.energy) < 1e-9]
    assert len(zero) > 1
    checks = check_energies(p, lines, 1e-8)
    assert all(c.passed for c in checks), [(c.name, c.residual) for c in checks if not c.passed]


def test_separated_residual(rng: np.random.Generator) -> None:
    m = np.diag([-2.0, 0.0, 0.0, 3.0]) + 1e-15 * rng.standard_normal((4, 4))
    values = [-2.0, 0.0, 0.0, 3.0]
    norm = float(np.linalg.norm(m))
    for v in values:
        assert separated_residual(lu_determinant(m - v * np.eye(4)), v, values, norm) < 1e-12
    wrong = [-2.0, 0.1, 0.0, 3.0]
    assert separated_residual(lu_determinant(m - 0.1 * np.eye(4)), 0.1, wrong, norm) > 1e-3


def test_continuity_follows_every_state(rng: np.random.Generator) -> None:
    p = ModelParameters(n=6)
    checks = check_continuity(p, rng, 0.37 + 0.21j)
    assert [c.name for c in checks] == ["richardson"]
    assert checks[0].passed, checks[0].residual


def test_followed_states_keep_their_shape() -> None:
    base = PRESETS["table3"].model
    pool = solve_bae(base)
    states = enumerate_states(base, pool)
    followed = follow_states(base, states, pool, base.with_theta((1e-3, -1e-3j, 2e-3)))
    assert followed is not None
    assert [len(s.finite_roots) for s in followed] == [len(s.finite_roots) for s in states]
    for s, t in zip(states, followed):
        assert all(abs(a - b) < 1e-1 for a, b in zip(s.finite_roots, t.finite_roots))


def test_degree_check_without_boundary_terms() -> None:
    p = ModelParameters(n=2, boundary=Boundary.OPEN, a_minus=0.0, a_plus=0.0)
    checks = [c for c in verify_tq_relations(p, np.random.default_rng(5)) if c.family == "tq-degree"]
    assert any(c.name.startswith("leading-") for c in checks)
    assert all(c.passed for c in checks), [(c.name, c.residual) for c in checks if not c.passed]
