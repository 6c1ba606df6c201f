import logging
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Tuple

from gl11.algebra.graded import (
    FUNDAMENTAL,
    GradedOperator,
    GradedSpace,
    compress,
    embed,
    relative_residual,
)
from gl11.errors import DomainError, StructureError
from gl11.fusion.projectors import (
    BAR_PARITY,
    BAR_PRIME_PARITY,
    TILDE_PARITY,
    Projector,
    ProjectorKind,
    build_projector,
)
from gl11.model.matrices import k_minus, k_plus, r_matrix
from gl11.model.types import GRASSMANN, GrassmannContext, ModelParameters

logger = logging.getLogger(__name__)

DEGENERACY_TOLERANCE = 1e-11
NORMALIZATION_CLEARANCE = 1e-8
# evaluation points (in units of eta) for the exact linear reconstruction
REGULAR_NODES = (0.3137, 1.2291, -0.8423, 2.0719, -1.6607)


class Sign(Enum):
    PLUS = "+"
    MINUS = "-"


def _projector_for(branch: int, level: int) -> ProjectorKind:
    table = {
        (1, 1): ProjectorKind.P_PLUS,
        (2, 1): ProjectorKind.P_MINUS,
        (1, 2): ProjectorKind.PP_MINUS,
        (2, 2): ProjectorKind.PC_PLUS,
    }
    if (branch, level) not in table:
        raise DomainError(f"unknown fusion branch/level {branch}/{level}")
    return table[(branch, level)]


def fused_parity(branch: int, level: int) -> Tuple[int, ...]:
    if level == 1:
        return BAR_PARITY if branch == 1 else BAR_PRIME_PARITY
    return TILDE_PARITY


def _linear(
    f: Callable[[complex], GradedOperator], eta: complex
) -> Tuple[GradedOperator, GradedOperator]:
    """(A, B) with f(u) = A + u B, from the first two regular nodes."""
    values = []
    for x in REGULAR_NODES:
        u = x * eta
        try:
            values.append((u, f(u)))
        except DomainError:
            continue
        if len(values) == 2:
            break
    if len(values) < 2:
        raise DomainError("no regular evaluation points for linear reconstruction")
    (u1, f1), (u2, f2) = values
    b = (f2 - f1) / (u2 - u1)
    a = f1 - u1 * b
    return a, b


def _r_level1(branch: int, u: complex, eta: complex) -> GradedOperator:
    w = build_projector(_projector_for(branch, 1))
    chain = GradedSpace.chain(FUNDAMENTAL, FUNDAMENTAL, FUNDAMENTAL)
    s = 0.5 * eta if branch == 1 else -0.5 * eta
    norm = u + s
    if abs(norm) <= NORMALIZATION_CLEARANCE:
        raise DomainError(f"fused R normalization u{'+' if branch == 1 else '-'}eta/2 vanishes")
    x = embed(r_matrix(u - s, eta), (0, 2), chain) @ embed(r_matrix(u + s, eta), (1, 2), chain)
    return compress(x, w.basis, 0, w.parity) / norm


def _r_level2(branch: int, u: complex, eta: complex) -> GradedOperator:
    w = build_projector(_projector_for(branch, 2))
    bar = fused_parity(branch, 1)
    chain = GradedSpace.chain(bar, FUNDAMENTAL, FUNDAMENTAL)
    if abs(u) <= NORMALIZATION_CLEARANCE:
        raise DomainError("fused R normalization u vanishes")
    s = eta if branch == 1 else -eta
    inner = fuse_r(branch, 1, u - 0.5 * s, eta)
    x = embed(r_matrix(u + s, eta), (1, 2), chain) @ embed(inner, (0, 2), chain)
    return compress(x, w.basis, 0, w.parity) / u


@lru_cache(maxsize=256)
def _r_coefficients(branch: int, level: int, eta: complex) -> Tuple[GradedOperator, GradedOperator]:
    build = _r_level1 if level == 1 else _r_level2
    return _linear(lambda u: build(branch, u, eta), eta)


def fuse_r(branch: int, level: int, u: complex, eta: complex) -> GradedOperator:
    """
    Fused R-matrix on [fused, V], linear in u.

    Level 1 is R_{1bar,n} (branch 1) or R_{1bar',n} (branch 2); level 2 is
    R_{1tilde,n} / R_{1tilde',n}, which coincide.
    """
    _projector_for(branch, level)
    a, b = _r_coefficients(branch, level, complex(eta))
    return a + u * b


def projector(kind: ProjectorKind, eta: complex) -> Projector:
    """Projector with its degeneracy relation to the (fused) R-matrix checked."""
    proj = build_projector(kind)
    eta = complex(eta)
    if kind == ProjectorKind.P_PLUS:
        degenerate, factor = r_matrix(eta, eta), 2 * eta
    elif kind == ProjectorKind.P_MINUS:
        degenerate, factor = r_matrix(-eta, eta), -2 * eta
    elif kind == ProjectorKind.PP_MINUS:
        degenerate, factor = fuse_r(1, 1, -1.5 * eta, eta), -3 * eta
    else:
        degenerate, factor = fuse_r(2, 1, 1.5 * eta, eta), 3 * eta
    residual = relative_residual(degenerate, factor * proj.operator)
    if residual > DEGENERACY_TOLERANCE:
        raise StructureError(
            f"projector {kind.value} fails its degeneracy relation (residual {residual:.3e})"
        )
    return proj


def _check_norm(value: complex, label: str) -> complex:
    if abs(value) <= NORMALIZATION_CLEARANCE:
        raise DomainError(f"fused K normalization factor {label} vanishes")
    return value


def _a(p: ModelParameters, sign: Sign) -> complex:
    return p.a_plus if sign == Sign.PLUS else p.a_minus


# scalar normalizations of the fused K-matrices, as (factor, label) pairs
def _norm_factors(
    branch: int, level: int, sign: Sign, u: complex, a: complex, eta: complex
) -> Tuple[Tuple[complex, str], ...]:
    h = 0.5 * eta
    table: Dict[Tuple[int, int, Sign], Tuple[Tuple[complex, str], ...]] = {
        (1, 1, Sign.MINUS): ((1 + (u - h) * a, "1+(u-eta/2)a-"), (u + h, "u+eta/2")),
        (1, 1, Sign.PLUS): ((1 + (u + h) * a, "1+(u+eta/2)a+"), (u - h, "u-eta/2")),
        (2, 1, Sign.MINUS): ((1 - (u + h) * a, "1-(u+eta/2)a-"), (u - h, "u-eta/2")),
        (2, 1, Sign.PLUS): ((1 - (u - h) * a, "1-(u-eta/2)a+"), (u + h, "u+eta/2")),
        (1, 2, Sign.MINUS): ((1 - (u + eta) * a, "1-(u+eta)a-"), (u - h, "u-eta/2")),
        (1, 2, Sign.PLUS): ((1 - u * a, "1-ua+"), (u + eta, "u+eta")),
        (2, 2, Sign.MINUS): ((1 + (u - eta) * a, "1+(u-eta)a-"), (u + h, "u+eta/2")),
        (2, 2, Sign.PLUS): ((1 + u * a, "1+ua+"), (u - eta, "u-eta")),
    }
    return table[(branch, level, sign)]


def _normalization(
    branch: int, level: int, sign: Sign, u: complex, p: ModelParameters
) -> complex:
    value = 1.0 + 0j if level == 1 else 2.0 + 0j
    for factor, label in _norm_factors(branch, level, sign, u, _a(p, sign), p.eta):
        value *= _check_norm(factor, label)
    return value


def _k_level1(
    branch: int, sign: Sign, u: complex, p: ModelParameters, g: GrassmannContext
) -> GradedOperator:
    eta = p.eta
    norm = _normalization(branch, 1, sign, u, p)
    chain = GradedSpace.chain(FUNDAMENTAL, FUNDAMENTAL, FUNDAMENTAL)
    h = 0.5 * eta if branch == 1 else -0.5 * eta
    if sign == Sign.MINUS:
        x = (
            embed(k_minus(u - h, p, g), (0, 1), chain)
            @ embed(r_matrix(2 * u, eta), (1, 2), chain)
            @ embed(k_minus(u + h, p, g), (0, 2), chain)
        )
    else:
        x = (
            embed(k_plus(u + h, p, g), (0, 2), chain)
            @ embed(r_matrix(-2 * u, eta), (1, 2), chain)
            @ embed(k_plus(u - h, p, g), (0, 1), chain)
        )
    w = build_projector(_projector_for(branch, 1))
    return compress(x, w.basis, 1, w.parity) / norm


def _k_level2(
    branch: int, sign: Sign, u: complex, p: ModelParameters, g: GrassmannContext
) -> GradedOperator:
    eta = p.eta
    norm = _normalization(branch, 2, sign, u, p)
    chain = GradedSpace.chain(FUNDAMENTAL, fused_parity(branch, 1), FUNDAMENTAL)
    s = eta if branch == 1 else -eta
    k_bar_a, k_bar_b = fused_k_coefficients(branch, 1, sign, p, g)
    k_bar = k_bar_a + (u - 0.5 * s) * k_bar_b
    if sign == Sign.MINUS:
        x = (
            embed(k_minus(u + s, p, g), (0, 2), chain)
            @ embed(fuse_r(branch, 1, 2 * u + 0.5 * s, eta), (1, 2), chain)
            @ embed(k_bar, (0, 1), chain)
        )
    else:
        x = (
            embed(k_bar, (0, 1), chain)
            @ embed(fuse_r(branch, 1, -2 * u - 0.5 * s, eta), (1, 2), chain)
            @ embed(k_plus(u + s, p, g), (0, 2), chain)
        )
    w = build_projector(_projector_for(branch, 2))
    return compress(x, w.basis, 1, w.parity) / norm


def fuse_k(
    branch: int,
    level: int,
    sign: Sign,
    u: complex,
    p: ModelParameters,
    g: GrassmannContext = GRASSMANN,
) -> GradedOperator:
    """
    Fused K-matrix on [grassmann, fused] from its defining projection.

    Raises DomainError at a zero of the scalar normalization.
    """
    if not p.is_open:
        raise DomainError("fused K-matrices need an open boundary")
    _projector_for(branch, level)
    if level == 1:
        return _k_level1(branch, sign, u, p, g)
    return _k_level2(branch, sign, u, p, g)


@lru_cache(maxsize=64)
def fused_k_coefficients(
    branch: int,
    level: int,
    sign: Sign,
    p: ModelParameters,
    g: GrassmannContext = GRASSMANN,
) -> Tuple[GradedOperator, GradedOperator]:
    """(A, B) with K(u) = A + u B, valid at every u including normalization zeros."""
    logger.debug(f"reconstructing fused K (branch {branch}, level {level}, sign {sign.value})")
    return _linear(lambda u: fuse_k(branch, level, sign, u, p, g), p.eta)


def fused_k(
    branch: int,
    level: int,
    sign: Sign,
    u: complex,
    p: ModelParameters,
    g: GrassmannContext = GRASSMANN,
) -> GradedOperator:
    a, b = fused_k_coefficients(branch, level, sign, p, g)
    return a + u * b


def clear_caches() -> None:
    _r_coefficients.cache_clear()
    fused_k_coefficients.cache_clear()
