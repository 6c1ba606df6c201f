"""
Determinant-based certification of the Bethe ansatz spectrum.

Nothing here diagonalizes: eigenvalue membership, completeness and energies are
all reduced to LU determinants and polynomial interpolation.
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from gl11.algebra.dense import (
    PolySamples,
    circle_nodes,
    integer_nodes,
    interpolate,
    lu_determinant,
)
from gl11.algebra.graded import GradedOperator
from gl11.errors import DomainError
from gl11.fusion.checks import random_point
from gl11.model.matrices import grassmann_body
from gl11.model.types import ModelParameters, random_theta
from gl11.report import CheckResult, VerificationReport, new_report
from gl11.spectrum.bae import BetheRootSet, enumerate_states, solve_bae
from gl11.spectrum.tq import SpectralLine, spectral_line, tq_lambda
from gl11.transfer.hamiltonian import body_hamiltonian
from gl11.transfer.identities import a_function, alpha_function, kappa
from gl11.transfer.monodromy import Aux
from gl11.transfer.transfer import transfer
from gl11.utils import fan_out, format_complex

logger = logging.getLogger(__name__)

SPECTRAL_POINTS = 3
CONTINUITY_STEPS = (1e-2, 1e-3)
REALITY_TOLERANCE = 1e-8
# relative gap below which two eigenvalues count as one cluster
CLUSTER_RADIUS = 1e-6
KAPPA_FLOOR = 1e-12


def body_transfer(p: ModelParameters, u: complex) -> GradedOperator:
    t = transfer(p, Aux.BASE, u)
    return grassmann_body(t) if p.is_open else t


def states_of(p: ModelParameters) -> List[BetheRootSet]:
    return enumerate_states(p, solve_bae(p))


def spectrum_lines(p: ModelParameters) -> List[SpectralLine]:
    return [spectral_line(s, p) for s in states_of(p)]


def _scalar_residual(lhs: complex, rhs: complex) -> float:
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale if scale > 0 else 0.0


def spectral_points(
    p: ModelParameters, states: Sequence[BetheRootSet], rng: np.random.Generator, count: int = SPECTRAL_POINTS
) -> List[complex]:
    """Random points where every T-Q eigenvalue can be evaluated."""
    points: List[complex] = []
    for _ in range(100 * count):
        u = random_point(rng, p.eta)
        try:
            for s in states:
                tq_lambda(s, p, Aux.BASE, u)
        except DomainError:
            continue
        points.append(u)
        if len(points) == count:
            return points
    raise DomainError("could not place spectral points away from the T-Q poles")


def separated_residual(det: complex, value: complex, values: Sequence[complex], norm: float) -> float:
    """
    |det(M - v I)| with the factors of the other values divided out.

    Values within CLUSTER_RADIUS * norm of v, v itself included, count as `norm`.
    """
    if det == 0:
        return 0.0
    log_scale = 0.0
    for w in values:
        gap = abs(value - w)
        log_scale += math.log(gap if gap > CLUSTER_RADIUS * norm else norm)
    return math.exp(math.log(abs(det)) - log_scale)


def _spectral_norm_bound(m: GradedOperator, values: Sequence[complex]) -> float:
    return max(m.norm(), max((abs(v) for v in values), default=0.0), 1e-300)


def check_membership(
    p: ModelParameters,
    states: Sequence[BetheRootSet],
    u: complex,
    t: GradedOperator,
    tolerance: float,
    tag: str = "",
) -> List[CheckResult]:
    """|det(t(u) - Lambda_s(u) I)| relative to the other T-Q eigenvalues."""
    values = [tq_lambda(s, p, Aux.BASE, u) for s in states]
    norm = _spectral_norm_bound(t, values)
    ident = np.eye(t.domain.dim)

    def one(s: BetheRootSet, value: complex) -> CheckResult:
        det = lu_determinant(t.entries - value * ident)
        residual = separated_residual(det, value, values, norm)
        return CheckResult.judge(state_label(s) + tag, "membership", residual, tolerance, point=u)

    tasks: Dict[int, Callable[[], CheckResult]] = {
        i: (lambda s=s, v=v: one(s, v)) for i, (s, v) in enumerate(zip(states, values))
    }
    results = fan_out(tasks, desc="Certifying states")
    return [results[i] for i in range(len(states))]


def characteristic_coefficients(t: GradedOperator, rho: float) -> np.ndarray:
    """Ascending coefficients of det(y I - t / rho), interpolated on the unit circle."""
    d = t.domain.dim
    scaled = t.entries / rho
    ident = np.eye(d)
    nodes = circle_nodes(d + 1)
    dets = [lu_determinant(y * ident - scaled) for y in nodes]
    return interpolate(PolySamples(nodes, dets, d))


def check_completeness(
    p: ModelParameters, states: Sequence[BetheRootSet], u: complex, t: GradedOperator, tolerance: float
) -> CheckResult:
    values = np.asarray([tq_lambda(s, p, Aux.BASE, u) for s in states])
    d = t.domain.dim
    if len(values) != d:
        return CheckResult.judge(
            "characteristic-polynomial", "completeness", float("inf"), tolerance,
            note=f"{len(values)} states for a {d}-dimensional space", point=u,
        )
    rho = max(float(np.max(np.abs(values))), t.norm() / np.sqrt(d), 1e-300)
    got = characteristic_coefficients(t, rho)
    expected = Polynomial.fromroots(values / rho).coef
    residual = float(np.max(np.abs(got - expected))) / float(np.max(np.abs(expected)))
    return CheckResult.judge("characteristic-polynomial", "completeness", residual, tolerance, point=u)


def check_energies(p: ModelParameters, lines: Sequence[SpectralLine], tolerance: float) -> List[CheckResult]:
    """det(H - E_s I) for every Bethe energy, on the Grassmann body for open chains."""
    if not p.is_homogeneous() or p.n < 2:
        logger.warning("energy cross-check needs a homogeneous chain with N >= 2, skipping")
        return []
    h = body_hamiltonian(p)
    energies = [line.energy for line in lines if line.energy is not None]
    norm = _spectral_norm_bound(h, energies)
    ident = np.eye(h.domain.dim)
    checks = []
    for line in lines:
        assert line.energy is not None
        det = lu_determinant(h.entries - line.energy * ident)
        residual = separated_residual(det, line.energy, energies, norm)
        checks.append(
            CheckResult.judge(
                state_label(line.roots), "energy", residual, tolerance, note=f"E = {format_complex(line.energy)}"
            )
        )
    return checks


def check_energy_reality(p: ModelParameters, lines: Sequence[SpectralLine]) -> List[CheckResult]:
    if not (p.is_open and p.is_hermitian() and abs(p.eta.imag) == 0):
        return []
    worst = max((abs(line.energy.imag) for line in lines if line.energy is not None), default=0.0)
    return [CheckResult.judge("imaginary-part", "energy-reality", worst, REALITY_TOLERANCE)]


def check_q_symmetry(
    p: ModelParameters, states: Sequence[BetheRootSet], u: complex, tolerance: float
) -> List[CheckResult]:
    """Replacing any lambda_k by -lambda_k - eta leaves every open eigenvalue unchanged."""
    if not p.is_open:
        return []
    worst = 0.0
    for s in states:
        reference = tq_lambda(s, p, Aux.BASE, u)
        for k in range(len(s.finite_roots)):
            roots = list(s.finite_roots)
            roots[k] = -roots[k] - p.eta
            flipped = BetheRootSet(s.kind, tuple(roots))
            worst = max(worst, _scalar_residual(tq_lambda(flipped, p, Aux.BASE, u), reference))
    return [CheckResult.judge("root-reflection", "q-symmetry", worst, tolerance, point=u)]


def _periodic_relations(p: ModelParameters, s: BetheRootSet) -> Dict[str, float]:
    eta = p.eta

    def lam(level: Aux, u: complex) -> complex:
        return tq_lambda(s, p, level, u)

    worst: Dict[str, float] = {}
    for th in p.theta:
        pairs = {
            "t-t": (lam(Aux.BASE, th) * lam(Aux.BASE, th + eta), a_function(p, th + eta) * lam(Aux.BAR, th + 0.5 * eta)),
            "t-t2": (lam(Aux.BASE, th - eta) * lam(Aux.BASE, th), a_function(p, th - eta) * lam(Aux.BAR_PRIME, th - 0.5 * eta)),
            "t1-t": (lam(Aux.BAR, th - 1.5 * eta) * lam(Aux.BASE, th), a_function(p, th - eta) * lam(Aux.TILDE, th - eta)),
            "t2-t": (lam(Aux.BAR_PRIME, th + 1.5 * eta) * lam(Aux.BASE, th), a_function(p, th + eta) * lam(Aux.TILDE, th + eta)),
        }
        for name, (lhs, rhs) in pairs.items():
            worst[name] = max(worst.get(name, 0.0), _scalar_residual(lhs, rhs))
    return worst


def _open_relations(p: ModelParameters, s: BetheRootSet) -> Dict[str, float]:
    eta = p.eta

    def lam(level: Aux, u: complex) -> complex:
        return tq_lambda(s, p, level, u)

    def alpha(u: complex) -> complex:
        return alpha_function(p, u)

    worst: Dict[str, float] = {}
    for th in p.theta:
        for sign, label in ((1, "plus"), (-1, "minus")):
            x = sign * th
            lx = lam(Aux.BASE, x)
            pairs = {
                f"t-t-{label}": (
                    lx * lam(Aux.BASE, x + eta),
                    -0.25 * x * (x + eta) / (x + 0.5 * eta) ** 2 * alpha(x) * lam(Aux.BAR, x + 0.5 * eta),
                ),
                f"t-t2-{label}": (
                    lam(Aux.BASE, x - eta) * lx,
                    -0.25 * x * (x - eta) / (x - 0.5 * eta) ** 2 * alpha(-x) * lam(Aux.BAR_PRIME, x - 0.5 * eta),
                ),
                f"t1-t-{label}": (
                    lam(Aux.BAR, x - 1.5 * eta) * lx,
                    -x * (x - 1.5 * eta) / ((x - 0.5 * eta) * (x - eta)) * alpha(-x) * lam(Aux.TILDE, x - eta),
                ),
                f"t2-t-{label}": (
                    lam(Aux.BAR_PRIME, x + 1.5 * eta) * lx,
                    -x * (x + 1.5 * eta) / ((x + 0.5 * eta) * (x + eta)) * alpha(x) * lam(Aux.TILDE, x + eta),
                ),
            }
            for name, (lhs, rhs) in pairs.items():
                worst[name] = max(worst.get(name, 0.0), _scalar_residual(lhs, rhs))
    return worst


def _open_special_values(p: ModelParameters, s: BetheRootSet) -> Dict[str, float]:
    eta = p.eta

    def lam(level: Aux, u: complex) -> complex:
        return tq_lambda(s, p, level, u)

    reference = max(abs(lam(Aux.BASE, 0.731 * eta)), 1e-300)
    out = {f"zero-{level.value}": abs(lam(level, 0.0)) / reference for level in (Aux.BASE, Aux.BAR, Aux.BAR_PRIME, Aux.TILDE)}
    out["bar-minus-half"] = _scalar_residual(lam(Aux.BAR, -0.5 * eta), -2 * lam(Aux.BASE, -eta))
    out["bar-plus-half"] = _scalar_residual(lam(Aux.BAR, 0.5 * eta), -2 * lam(Aux.BASE, eta))
    out["bar-prime-minus-half"] = _scalar_residual(lam(Aux.BAR_PRIME, -0.5 * eta), 2 * lam(Aux.BASE, -eta))
    out["bar-prime-plus-half"] = _scalar_residual(lam(Aux.BAR_PRIME, 0.5 * eta), 2 * lam(Aux.BASE, eta))
    out["tilde-eta"] = _scalar_residual(lam(Aux.TILDE, eta), (2.0 / 3.0) * lam(Aux.BAR, 1.5 * eta))
    return out


def _scalar_coefficients(
    s: BetheRootSet, p: ModelParameters, level: Aux, degree: int, nodes: Sequence[complex]
) -> np.ndarray:
    values = [tq_lambda(s, p, level, u) for u in nodes]
    return interpolate(PolySamples(list(nodes), values, degree))


def _degree_residuals(p: ModelParameters, s: BetheRootSet) -> Dict[str, float]:
    """Periodic: the u^N slot vanishes. Open: top slot vanishes, next one is c kappa."""
    out: Dict[str, float] = {}
    if not p.is_open:
        nodes, _ = integer_nodes(p.n + 1, [r for r in s.finite_roots])
        coeffs = _scalar_coefficients(s, p, Aux.BASE, p.n, nodes)
        scale = float(np.max(np.abs(coeffs)))
        out["degree"] = abs(coeffs[p.n]) / scale if scale > 0 else 0.0
        return out
    top = 2 * p.n + 2
    radius = 2.0 * abs(p.eta)
    nodes = circle_nodes(top + 1, radius)
    k = kappa(p)
    for level, factor in ((Aux.BASE, 2), (Aux.BAR, -8), (Aux.BAR_PRIME, 8), (Aux.TILDE, -8)):
        coeffs = _scalar_coefficients(s, p, level, top, nodes)
        scaled = np.abs(coeffs) * radius ** np.arange(len(coeffs))
        out[f"top-{level.value}"] = float(scaled[top] / np.max(scaled))
        expected = factor * k
        if abs(expected) <= KAPPA_FLOOR:
            # a+ = a- = 0: the u^(2N+1) slot vanishes as well
            out[f"leading-{level.value}"] = float(scaled[top - 1] / np.max(scaled))
        else:
            out[f"leading-{level.value}"] = _scalar_residual(complex(coeffs[top - 1]), expected)
    return out


def verify_tq_relations(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-8
) -> List[CheckResult]:
    """
    Functional relations of the T-Q eigenvalues for every state, at a generic
    draw of the inhomogeneities; each family reports its worst state.
    """
    q = p.with_theta(random_theta(p.n, rng))
    if q.is_open:
        q.check_open_generic()
    else:
        q.check_generic()
    states = states_of(q)
    worst: Dict[Tuple[str, str], float] = {}
    for s in states:
        families = [("tq-relation", _periodic_relations(q, s) if not q.is_open else _open_relations(q, s))]
        if q.is_open:
            families.append(("tq-special-values", _open_special_values(q, s)))
        families.append(("tq-degree", _degree_residuals(q, s)))
        for family, residuals in families:
            for name, residual in residuals.items():
                worst[(family, name)] = max(worst.get((family, name), 0.0), residual)
    return [
        CheckResult.judge(name, family, residual, tolerance, note=f"worst of {len(states)} states")
        for (family, name), residual in sorted(worst.items())
    ]


def _root_distance(p: ModelParameters, a: complex, b: complex) -> float:
    if p.is_open:
        return min(abs(a - b), abs(a + b + p.eta))
    return abs(a - b)


def follow_states(
    p: ModelParameters, states: Sequence[BetheRootSet], pool: Sequence[complex], q: ModelParameters
) -> Optional[List[BetheRootSet]]:
    """
    The states of `q` that continue `states` of `p`: every root of `pool` is
    replaced by its nearest Bethe root of `q`. None when the root counts differ.
    """
    moved = solve_bae(q)
    if len(moved) != len(pool):
        return None
    pairs = sorted(
        (_root_distance(p, r, c), i, j) for i, r in enumerate(pool) for j, c in enumerate(moved)
    )
    image: Dict[int, complex] = {}
    used: Set[int] = set()
    for _, i, j in pairs:
        if i in image or j in used:
            continue
        c = moved[j]
        if p.is_open and abs(pool[i] + c + p.eta) < abs(pool[i] - c):
            c = -c - p.eta
        image[i] = c
        used.add(j)
    index = {r: i for i, r in enumerate(pool)}
    return [
        BetheRootSet(s.kind, tuple(image[index[r]] for r in s.finite_roots), s.has_infinite_root)
        for s in states
    ]


def check_continuity(
    p: ModelParameters, rng: np.random.Generator, u: complex
) -> List[CheckResult]:
    """
    Every eigenvalue at theta = eps d approaches its homogeneous value: the
    Richardson combination of eps = 1e-2 and 1e-3 matches within 10 eps^2.
    """
    base = p.homogeneous()
    pool = solve_bae(base)
    states = enumerate_states(base, pool)
    reference = np.asarray([tq_lambda(s, base, Aux.BASE, u) for s in states])
    direction = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, size=p.n))
    e1, e2 = CONTINUITY_STEPS
    tolerance = 10 * e1**2
    values: List[np.ndarray] = []
    for eps in (e1, e2):
        q = base.with_theta(eps * direction)
        followed = follow_states(base, states, pool, q)
        if followed is None:
            return [
                CheckResult.judge(
                    "richardson", "continuity", float("inf"), tolerance,
                    note=f"root count changes at eps = {eps:g}", point=u,
                )
            ]
        values.append(np.asarray([tq_lambda(s, q, Aux.BASE, u) for s in followed]))
    extrapolated = (e1 * values[1] - e2 * values[0]) / (e1 - e2)
    scale = max(float(np.max(np.abs(reference))), 1e-300)
    residual = float(np.max(np.abs(extrapolated - reference))) / scale
    return [CheckResult.judge("richardson", "continuity", residual, tolerance, point=u)]



def state_label(s: BetheRootSet) -> str:
    roots = [format_complex(r) for r in s.finite_roots]
    if s.has_infinite_root:
        roots.append("inf")
    return "{" + ", ".join(roots) + "}"


def certify_spectrum(
    p: ModelParameters,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
    membership_tolerance: float = 1e-8,
    spectral_tolerance: float = 1e-6,
    relation_tolerance: float = 1e-8,
) -> VerificationReport:
    """Membership, completeness, energies and T-Q relations of the Bethe spectrum."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    report = new_report("spectrum", p, seed)
    lines = spectrum_lines(p)
    states = [line.roots for line in lines]
    logger.info(f"{len(states)} Bethe states for N={p.n} ({p.boundary.value})")
    points = spectral_points(p, states, rng)
    for i, u in enumerate(points):
        t = body_transfer(p, u)
        report.extend(check_membership(p, states, u, t, membership_tolerance, tag=f"@u{i}"))
        completeness = check_completeness(p, states, u, t, spectral_tolerance)
        completeness.name += f"@u{i}"
        report.checks.append(completeness)
    report.extend(check_energies(p, lines, membership_tolerance))
    report.extend(check_energy_reality(p, lines))
    report.extend(check_q_symmetry(p, states, points[0], relation_tolerance))
    report.extend(verify_tq_relations(p, rng, relation_tolerance))
    if p.is_homogeneous():
        report.extend(check_continuity(p, rng, points[0]))
    return report.sort()
