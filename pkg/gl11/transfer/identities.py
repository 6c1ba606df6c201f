"""Operator identities of the monodromy and transfer matrices, evaluated as full matrices."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from gl11.algebra.dense import PolySamples, circle_nodes, integer_nodes, interpolate
from gl11.algebra.graded import (
    FUNDAMENTAL,
    GradedOperator,
    GradedSpace,
    commutator,
    compress,
    embed,
    relative_residual,
    super_trace,
)
from gl11.fusion.checks import random_point
from gl11.fusion.fused import Sign, fuse_r
from gl11.fusion.projectors import Projector, ProjectorKind, build_projector
from gl11.model.matrices import grassmann_body, r_matrix
from gl11.model.types import Boundary, ModelParameters
from gl11.report import CheckResult, VerificationReport, new_report
from gl11.transfer.monodromy import (
    Aux,
    aux_k,
    monodromy,
    monodromy_on,
    open_chain,
    reflecting_monodromy,
    reflecting_monodromy_on,
    site_positions,
)
from gl11.transfer.transfer import transfer

logger = logging.getLogger(__name__)

# full matrices up to this many sites, random probing beyond
FULL_MATRIX_SITES = 4
RANDOM_VECTORS = 6
GRASSMANN_DRAWS = 5


def a_function(p: ModelParameters, u: complex) -> complex:
    """a(u) = prod_j (u - theta_j)"""
    return complex(np.prod([u - t for t in p.theta]))


def shifted_product(p: ModelParameters, u: complex, shift: complex) -> complex:
    """prod_l (u + theta_l + shift)"""
    return complex(np.prod([u + t + shift for t in p.theta]))


def alpha_function(p: ModelParameters, u: complex) -> complex:
    """(1 + u a-)(1 + (u + eta) a+) prod_j (u + theta_j + eta)(u - theta_j + eta)"""
    eta = p.eta
    value = (1 + u * p.a_minus) * (1 + (u + eta) * p.a_plus)
    for t in p.theta:
        value *= (u + t + eta) * (u - t + eta)
    return complex(value)


def kappa(p: ModelParameters) -> complex:
    """Leading coefficient scale of the open transfer matrix: a+ + a- + N eta a+ a-."""
    return p.a_plus + p.a_minus + p.n * p.eta * p.a_plus * p.a_minus


class Comparator:
    """Relative residuals on full matrices, or on random vectors for long chains."""

    def __init__(self, p: ModelParameters, rng: Optional[np.random.Generator] = None) -> None:
        self.sampled = p.n > FULL_MATRIX_SITES
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self._vectors: dict[int, np.ndarray] = {}

    def _block(self, dim: int) -> np.ndarray:
        if dim not in self._vectors:
            self._vectors[dim] = self.rng.standard_normal((dim, RANDOM_VECTORS)) + 1j * self.rng.standard_normal(
                (dim, RANDOM_VECTORS)
            )
        return self._vectors[dim]

    def residual(self, lhs: GradedOperator, rhs: GradedOperator) -> float:
        if not self.sampled:
            return relative_residual(lhs, rhs)
        block = self._block(lhs.domain.dim)
        return relative_residual(lhs.entries @ block, rhs.entries @ block)


def fitted_residual(lhs: GradedOperator, rhs: GradedOperator) -> Tuple[float, complex]:
    """Best scalar c with lhs = c rhs, and ||lhs - c rhs|| / ||lhs||."""
    r = rhs.entries.ravel()
    l = lhs.entries.ravel()
    denom = np.vdot(r, r)
    c = complex(np.vdot(r, l) / denom) if denom != 0 else 0j
    scale = float(np.linalg.norm(l))
    if scale == 0.0:
        return 0.0, c
    return float(np.linalg.norm(l - c * r)) / scale, c


def _proj_on(proj: Projector, chain: GradedSpace) -> GradedOperator:
    return embed(proj.operator, (0, 1), chain)


# (first aux, second aux, projector, shift of the second argument, projected aux)
_PAIRS: Tuple[Tuple[Aux, Aux, ProjectorKind, Aux], ...] = (
    (Aux.BASE, Aux.BASE, ProjectorKind.P_PLUS, Aux.BAR),
    (Aux.BASE, Aux.BASE, ProjectorKind.P_MINUS, Aux.BAR_PRIME),
    (Aux.BAR, Aux.BASE, ProjectorKind.PP_MINUS, Aux.TILDE),
    (Aux.BAR_PRIME, Aux.BASE, ProjectorKind.PC_PLUS, Aux.TILDE_PRIME),
)


def _pair_product(
    p: ModelParameters,
    index: int,
    u_first: complex,
    u_second: complex,
    reflecting: bool,
) -> Tuple[GradedOperator, GradedSpace, Projector]:
    """
    Product of two monodromies on [aux0, aux1, sites].

    For the P± pairs this is T_1(u_first) T_2(u_second); for the fused pairs it is
    T_2(u_second) T_1bar(u_first), with the fused space at position 0.
    """
    first, _, kind, _ = _PAIRS[index]
    chain = GradedSpace.chain(first.parity, FUNDAMENTAL, *([FUNDAMENTAL] * p.n))
    sites = site_positions(chain, 2)
    build = reflecting_monodromy_on if reflecting else monodromy_on
    t_first = build(chain, 0, sites, p, first, u_first)
    t_second = build(chain, 1, sites, p, Aux.BASE, u_second)
    product = t_first @ t_second if first == Aux.BASE else t_second @ t_first
    return product, chain, build_projector(kind)


def projection_identity_residuals(
    p: ModelParameters, reflecting: bool = False, comparator: Optional[Comparator] = None
) -> List[Tuple[str, float]]:
    """
    Residuals of X = Proj X at the degenerate points, one per (family, theta_j).

    Monodromies at theta_j use second-argument shifts +eta, -eta and fused
    first arguments theta_j -+ 3eta/2; reflecting ones use -theta_j.
    """
    comparator = comparator or Comparator(p)
    eta = p.eta
    out: List[Tuple[str, float]] = []
    labels = ("p-plus", "p-minus", "pp-minus", "pc-plus")
    for j, theta in enumerate(p.theta):
        x = -theta if reflecting else theta
        points = (
            (x, x + eta),
            (x, x - eta),
            (x - 1.5 * eta, x),
            (x + 1.5 * eta, x),
        )
        for index, (u_first, u_second) in enumerate(points):
            product, chain, proj = _pair_product(p, index, u_first, u_second, reflecting)
            projected = _proj_on(proj, chain) @ product
            out.append((f"{labels[index]}-{j + 1}", comparator.residual(product, projected)))
    return out


def _fused_product_checks(
    p: ModelParameters, u: complex, reflecting: bool, comparator: Comparator
) -> List[Tuple[str, float]]:
    eta = p.eta
    if reflecting:
        factors = (
            shifted_product(p, u, eta),
            shifted_product(p, u, -eta),
            shifted_product(p, u, 0),
            shifted_product(p, u, 0),
        )
    else:
        factors = (
            a_function(p, u + eta),
            a_function(p, u - eta),
            a_function(p, u),
            a_function(p, u),
        )
    points = (
        (u, u + eta, u + 0.5 * eta),
        (u, u - eta, u - 0.5 * eta),
        (u - 0.5 * eta, u + eta, u),
        (u + 0.5 * eta, u - eta, u),
    )
    labels = ("bar", "bar-prime", "tilde", "tilde-prime")
    single = reflecting_monodromy if reflecting else monodromy
    out = []
    for index, ((u_first, u_second, u_fused), factor) in enumerate(zip(points, factors)):
        product, _, proj = _pair_product(p, index, u_first, u_second, reflecting)
        lhs = compress(product, proj.basis, 0, proj.parity)
        fused_aux = _PAIRS[index][3]
        rhs = factor * single(p, fused_aux, u_fused)
        out.append((labels[index], comparator.residual(lhs, rhs.with_spaces(lhs.domain, lhs.domain))))
    return out


def verify_projection_identities(
    p: ModelParameters,
    rng: Optional[np.random.Generator] = None,
    tolerance: float = 1e-9,
    seed: Optional[int] = None,
) -> VerificationReport:
    """Projection identities at theta_j, their reflecting analogues, and the fused products."""
    p.check_generic()
    rng = rng if rng is not None else np.random.default_rng(seed)
    comparator = Comparator(p, rng)
    report = new_report("projection-identities", p, seed)
    for reflecting, family in ((False, "projection"), (True, "reflecting-projection")):
        for name, residual in projection_identity_residuals(p, reflecting, comparator):
            report.checks.append(CheckResult.judge(name, family, residual, tolerance))
    u = random_point(rng, p.eta)
    for reflecting, family in ((False, "fused-monodromy"), (True, "fused-reflecting-monodromy")):
        for name, residual in _fused_product_checks(p, u, reflecting, comparator):
            report.checks.append(CheckResult.judge(name, family, residual, tolerance, point=u))
    return report


def check_rtt(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-9
) -> List[CheckResult]:
    """R_{a,b}(u-v) T_a(u) T_b(v) = T_b(v) T_a(u) R_{a,b}(u-v) for T and T^, every aux."""
    checks = []
    u, v = random_point(rng, p.eta), random_point(rng, p.eta)
    comparator = Comparator(p, rng)
    for aux in Aux:
        chain = GradedSpace.chain(aux.parity, FUNDAMENTAL, *([FUNDAMENTAL] * p.n))
        sites = site_positions(chain, 2)
        if aux == Aux.BASE:
            r = embed(r_matrix(u - v, p.eta), (0, 1), chain)
        else:
            fusion = aux.fusion
            assert fusion is not None
            r = embed(fuse_r(fusion[0], fusion[1], u - v, p.eta), (0, 1), chain)
        for build, family in ((monodromy_on, "rtt"), (reflecting_monodromy_on, "reflecting-rtt")):
            ta = build(chain, 0, sites, p, aux, u)
            tb = build(chain, 1, sites, p, Aux.BASE, v)
            residual = comparator.residual(r @ ta @ tb, tb @ ta @ r)
            checks.append(CheckResult.judge(aux.value, family, residual, tolerance, point=u))
    return checks


def _periodic_identities(p: ModelParameters, comparator: Comparator) -> List[Tuple[str, float]]:
    eta = p.eta
    out = []

    def t(aux: Aux, u: complex) -> GradedOperator:
        return transfer(p, aux, u)

    for j, th in enumerate(p.theta):
        pairs = (
            ("t-t", t(Aux.BASE, th) @ t(Aux.BASE, th + eta), a_function(p, th + eta) * t(Aux.BAR, th + 0.5 * eta)),
            ("t-t2", t(Aux.BASE, th - eta) @ t(Aux.BASE, th), a_function(p, th - eta) * t(Aux.BAR_PRIME, th - 0.5 * eta)),
            ("t1-t", t(Aux.BAR, th - 1.5 * eta) @ t(Aux.BASE, th), a_function(p, th - eta) * t(Aux.TILDE, th - eta)),
            ("t2-t", t(Aux.BAR_PRIME, th + 1.5 * eta) @ t(Aux.BASE, th), a_function(p, th + eta) * t(Aux.TILDE, th + eta)),
        )
        for name, lhs, rhs in pairs:
            out.append((f"{name}-{j + 1}", comparator.residual(lhs, rhs)))
    return out


def _open_identities(p: ModelParameters, comparator: Comparator) -> List[Tuple[str, float]]:
    eta = p.eta
    out = []

    def t(aux: Aux, u: complex) -> GradedOperator:
        return transfer(p, aux, u)

    def alpha(u: complex) -> complex:
        return alpha_function(p, u)

    for j, th in enumerate(p.theta):
        for sign, label in ((1, "plus"), (-1, "minus")):
            x = sign * th
            t_x = t(Aux.BASE, x)
            pairs = (
                (
                    "t-t",
                    t_x @ t(Aux.BASE, x + eta),
                    -0.25 * x * (x + eta) / (x + 0.5 * eta) ** 2 * alpha(x) * t(Aux.BAR, x + 0.5 * eta),
                ),
                (
                    "t-t2",
                    t(Aux.BASE, x - eta) @ t_x,
                    -0.25 * x * (x - eta) / (x - 0.5 * eta) ** 2 * alpha(-x) * t(Aux.BAR_PRIME, x - 0.5 * eta),
                ),
                (
                    "t1-t",
                    t(Aux.BAR, x - 1.5 * eta) @ t_x,
                    -x * (x - 1.5 * eta) / ((x - 0.5 * eta) * (x - eta)) * alpha(-x) * t(Aux.TILDE, x - eta),
                ),
                (
                    "t2-t",
                    t(Aux.BAR_PRIME, x + 1.5 * eta) @ t_x,
                    -x * (x + 1.5 * eta) / ((x + 0.5 * eta) * (x + eta)) * alpha(x) * t(Aux.TILDE, x + eta),
                ),
            )
            for name, lhs, rhs in pairs:
                out.append((f"{name}-{label}-{j + 1}", comparator.residual(lhs, rhs)))
    return out


def verify_operator_identities(
    p: ModelParameters,
    rng: Optional[np.random.Generator] = None,
    tolerance: float = 1e-9,
    seed: Optional[int] = None,
) -> VerificationReport:
    """Products of two transfer matrices at theta_j (periodic) or +-theta_j (open)."""
    if p.is_open:
        p.check_open_generic()
    else:
        p.check_generic()
    rng = rng if rng is not None else np.random.default_rng(seed)
    comparator = Comparator(p, rng)
    report = new_report("operator-identities", p, seed)
    if p.boundary == Boundary.PERIODIC:
        residuals = _periodic_identities(p, comparator)
        family = "periodic-product"
    else:
        residuals = _open_identities(p, comparator)
        family = "open-product"
    for name, residual in residuals:
        logger.debug(f"{family} {name}: residual {residual:.3e}")
        report.checks.append(CheckResult.judge(name, family, residual, tolerance))
    return report


def _zero_residual(op: GradedOperator, reference: GradedOperator) -> float:
    scale = reference.norm()
    return op.norm() / scale if scale > 0 else op.norm()


def check_special_points(p: ModelParameters, tolerance: float = 1e-9) -> List[CheckResult]:
    """Vanishing at u = 0 and the relations between levels at +-eta/2, +-eta, 3eta/2."""
    eta = p.eta

    def t(aux: Aux, u: complex) -> GradedOperator:
        return transfer(p, aux, u)

    reference = t(Aux.BASE, 0.731 * eta)
    checks = []
    for aux in (Aux.BASE, Aux.BAR, Aux.BAR_PRIME, Aux.TILDE):
        checks.append(
            CheckResult.judge(f"zero-{aux.value}", "special-points", _zero_residual(t(aux, 0.0), reference), tolerance)
        )
    relations = (
        ("bar-minus-half", t(Aux.BAR, -0.5 * eta), -2 * t(Aux.BASE, -eta)),
        ("bar-plus-half", t(Aux.BAR, 0.5 * eta), -2 * t(Aux.BASE, eta)),
        ("bar-prime-minus-half", t(Aux.BAR_PRIME, -0.5 * eta), 2 * t(Aux.BASE, -eta)),
        ("bar-prime-plus-half", t(Aux.BAR_PRIME, 0.5 * eta), 2 * t(Aux.BASE, eta)),
        ("tilde-eta", t(Aux.TILDE, eta), (2.0 / 3.0) * t(Aux.BAR, 1.5 * eta)),
    )
    for name, lhs, rhs in relations:
        checks.append(CheckResult.judge(name, "special-points", relative_residual(lhs, rhs), tolerance))
    return checks


def transfer_coefficients(
    p: ModelParameters, aux: Aux, degree_bound: int, nodes: Sequence[complex]
) -> np.ndarray:
    samples = PolySamples(list(nodes), [transfer(p, aux, u) for u in nodes], degree_bound)
    return interpolate(samples)


def degenerate_points(p: ModelParameters) -> List[complex]:
    eta = p.eta
    points: List[complex] = []
    for t in p.theta:
        for k in range(-4, 5):
            points.extend([t + 0.5 * k * eta, -t + 0.5 * k * eta])
    return points


def check_degree(p: ModelParameters, tolerance: float = 1e-9) -> Tuple[List[CheckResult], float]:
    """Periodic transfer matrices are polynomials of degree N-1: the u^N slot vanishes."""
    nodes, shift = integer_nodes(p.n + 1, degenerate_points(p))
    checks = []
    for aux in (Aux.BASE, Aux.BAR, Aux.BAR_PRIME, Aux.TILDE):
        coeffs = transfer_coefficients(p, aux, p.n, nodes)
        scale = max(float(np.linalg.norm(c)) for c in coeffs)
        residual = float(np.linalg.norm(coeffs[p.n])) / scale if scale > 0 else 0.0
        checks.append(CheckResult.judge(aux.value, "degree", residual, tolerance, note=f"node shift {shift}"))
    return checks, shift


def check_asymptotics(p: ModelParameters, tolerance: float = 1e-9, radius: float = 2.0) -> List[CheckResult]:
    """
    Open chain: u^{2N+2} coefficient vanishes, u^{2N+1} coefficient is c kappa.

    c is 2 for t on the full operator, and -8, 8, -8 on the body of the fused levels.
    """
    top = 2 * p.n + 2
    nodes = circle_nodes(top + 1, radius * abs(p.eta))
    k = kappa(p)
    checks = []
    for aux, factor in ((Aux.BASE, 2), (Aux.BAR, -8), (Aux.BAR_PRIME, 8), (Aux.TILDE, -8)):
        coeffs = transfer_coefficients(p, aux, top, nodes)
        scale = max(float(np.linalg.norm(c)) * (radius * abs(p.eta)) ** i for i, c in enumerate(coeffs))
        vanishing = float(np.linalg.norm(coeffs[top])) * (radius * abs(p.eta)) ** top / scale
        checks.append(CheckResult.judge(f"top-{aux.value}", "asymptotics", vanishing, tolerance))
        leading = GradedOperator.on(
            GradedSpace(tuple([FUNDAMENTAL] * (p.n + 1))), coeffs[top - 1]
        )
        if aux == Aux.BASE:
            got = leading
        else:
            got = grassmann_body(leading, tol=1e-6)
        expected = factor * k * GradedOperator.identity(got.domain)
        checks.append(
            CheckResult.judge(
                f"leading-{aux.value}", "asymptotics", relative_residual(got, expected), tolerance,
                note=f"kappa {k:.12g}",
            )
        )
    return checks


def check_commutativity(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-9
) -> List[CheckResult]:
    u, v = random_point(rng, p.eta), random_point(rng, p.eta)
    levels = (Aux.BASE, Aux.BAR, Aux.BAR_PRIME, Aux.TILDE)
    values_u = {aux: transfer(p, aux, u) for aux in levels}
    values_v = {aux: transfer(p, aux, v) for aux in levels}
    checks = []
    for a in levels:
        for b in levels:
            x, y = values_u[a], values_v[b]
            scale = x.norm() * y.norm()
            residual = commutator(x, y).norm() / scale if scale > 0 else 0.0
            checks.append(CheckResult.judge(f"{a.value}-{b.value}", "commutativity", residual, tolerance, point=u))
    return checks


def check_tilde_closure(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-9
) -> List[CheckResult]:
    u = random_point(rng, p.eta)
    residual = relative_residual(transfer(p, Aux.TILDE, u), transfer(p, Aux.TILDE_PRIME, u))
    return [CheckResult.judge("tilde", "tilde-closure", residual, tolerance, point=u)]


def check_grassmann_independence(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-12, draws: int = GRASSMANN_DRAWS
) -> List[CheckResult]:
    """The body of t(u) does not depend on (b, f)."""
    u = random_point(rng, p.eta)
    body = transfer(p.body_only(), Aux.BASE, u)
    reference = grassmann_body(body)
    scale = max(float(np.max(np.abs(reference.entries))), 1.0)
    checks = []
    for i in range(draws):
        b = rng.uniform(-1.0, 1.0, size=(4, 2)) @ np.array([1.0, 1j])
        q = p.with_grassmann(*(complex(x) for x in b))
        got = grassmann_body(transfer(q, Aux.BASE, u))
        residual = float(np.max(np.abs(got.entries - reference.entries))) / scale
        checks.append(CheckResult.judge(f"draw-{i}", "grassmann-independence", residual, tolerance, point=u))
    return checks


def fusion_product_operator(
    p: ModelParameters, u: complex, which: int
) -> Tuple[GradedOperator, GradedOperator]:
    """
    Both sides of the two-transfer product written as one super trace over two
    auxiliary spaces on [grassmann, aux1, aux2, sites].

    which = 1: t(u) t(u+eta); 2: t1(u-eta/2) t(u+eta); 3: t2(u+eta/2) t(u-eta).
    The right side of 1 carries 1/rho2(2u+eta) with rho2(x) = -x^2; 2 and 3 are
    returned unnormalized.
    """
    eta = p.eta
    if which == 1:
        first, u1, u2 = Aux.BASE, u, u + eta
    elif which == 2:
        first, u1, u2 = Aux.BAR, u - 0.5 * eta, u + eta
    else:
        first, u1, u2 = Aux.BAR_PRIME, u + 0.5 * eta, u - eta
    chain = open_chain(p, first, Aux.BASE)
    sites = site_positions(chain, 3)

    def k(aux: Aux, sign: Sign, x: complex, pos: int) -> GradedOperator:
        return embed(aux_k(aux, sign, x, p), (0, pos), chain)

    def r(x: complex) -> GradedOperator:
        if first == Aux.BASE:
            return embed(r_matrix(x, eta), (1, 2), chain)
        fusion = first.fusion
        assert fusion is not None
        return embed(fuse_r(fusion[0], fusion[1], x, eta), (1, 2), chain)

    t1 = monodromy_on(chain, 1, sites, p, first, u1)
    t2 = monodromy_on(chain, 2, sites, p, Aux.BASE, u2)
    h1 = reflecting_monodromy_on(chain, 1, sites, p, first, u1)
    h2 = reflecting_monodromy_on(chain, 2, sites, p, Aux.BASE, u2)
    s = u1 + u2
    if which == 1:
        body = (
            k(Aux.BASE, Sign.PLUS, u2, 2) @ r(-s) @ k(Aux.BASE, Sign.PLUS, u1, 1)
            @ t1 @ t2
            @ k(Aux.BASE, Sign.MINUS, u1, 1) @ r(s) @ k(Aux.BASE, Sign.MINUS, u2, 2)
            @ h1 @ h2
        )
        rhs = super_trace(body, [1, 2]) / (-(s**2))
    else:
        body = (
            k(first, Sign.PLUS, u1, 1) @ r(-s) @ k(Aux.BASE, Sign.PLUS, u2, 2)
            @ t2 @ t1
            @ k(Aux.BASE, Sign.MINUS, u2, 2) @ r(s) @ k(first, Sign.MINUS, u1, 1)
            @ h2 @ h1
        )
        rhs = super_trace(body, [1, 2])
    lhs = transfer(p, first, u1) @ transfer(p, Aux.BASE, u2)
    return lhs, rhs


def check_fusion_products(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-9
) -> List[CheckResult]:
    u = random_point(rng, p.eta)
    lhs, rhs = fusion_product_operator(p, u, 1)
    checks = [CheckResult.judge("t-t", "fusion-product", relative_residual(lhs, rhs), tolerance, point=u)]
    for which, name in ((2, "t1-t"), (3, "t2-t")):
        lhs, rhs = fusion_product_operator(p, u, which)
        residual, scalar = fitted_residual(lhs, rhs)
        checks.append(
            CheckResult.judge(
                name, "fusion-product", residual, tolerance, fitted_scalar=scalar, point=u,
                note="checked up to an overall scalar",
            )
        )
    return checks


def transfer_battery(
    p: ModelParameters,
    rng: np.random.Generator,
    tolerance: float = 1e-9,
) -> Tuple[List[CheckResult], Optional[float]]:
    """Every transfer-level property beyond the product identities, with the node shift used."""
    checks = check_rtt(p, rng, tolerance)
    checks += check_commutativity(p, rng, tolerance)
    checks += check_tilde_closure(p, rng, tolerance)
    if p.boundary == Boundary.PERIODIC:
        degree, shift = check_degree(p, tolerance)
        return checks + degree, shift
    checks += check_special_points(p, tolerance)
    checks += check_asymptotics(p, tolerance)
    checks += check_grassmann_independence(p, rng)
    checks += check_fusion_products(p, rng, tolerance)
    return checks, None
