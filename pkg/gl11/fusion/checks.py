"""Local identities of the R- and K-matrices and of the fusion hierarchy."""

import logging
from typing import List, Tuple

import numpy as np

from gl11.algebra.graded import (
    FUNDAMENTAL,
    GradedOperator,
    GradedSpace,
    commutator,
    embed,
    partial_super_transpose,
    relative_residual,
    super_permutation,
)
from gl11.errors import StructureError
from gl11.fusion.fused import Sign, fuse_k, fuse_r, projector
from gl11.fusion.projectors import ProjectorKind
from gl11.model.matrices import V, k_minus, k_plus, r_matrix
from gl11.model.types import GRASSMANN, ModelParameters
from gl11.report import CheckResult
from gl11.transfer.monodromy import Aux, aux_k, aux_r

logger = logging.getLogger(__name__)

WITNESS_THRESHOLD = 1e-3


def random_point(rng: np.random.Generator, eta: complex) -> complex:
    x, y = rng.uniform(-1.0, 1.0, size=2)
    return complex(x, y) * eta + 0.1 * eta


def random_pair(rng: np.random.Generator, eta: complex) -> Tuple[complex, complex]:
    return random_point(rng, eta), random_point(rng, eta)


def _gybe(aux: Aux, u: complex, v: complex, eta: complex) -> float:
    chain = GradedSpace.chain(aux.parity, FUNDAMENTAL, FUNDAMENTAL)
    r12 = embed(aux_r(aux, u - v, eta), (0, 1), chain)
    r13 = embed(aux_r(aux, u, eta), (0, 2), chain)
    r23 = embed(r_matrix(v, eta), (1, 2), chain)
    return relative_residual(r12 @ r13 @ r23, r23 @ r13 @ r12)


def _reflection(aux: Aux, sign: Sign, u: complex, v: complex, p: ModelParameters) -> float:
    eta = p.eta
    chain = GradedSpace.chain(FUNDAMENTAL, aux.parity, FUNDAMENTAL)
    ka = embed(aux_k(aux, sign, u, p), (0, 1), chain)
    kb = embed(aux_k(Aux.BASE, sign, v, p), (0, 2), chain)

    def r(x: complex) -> GradedOperator:
        return embed(aux_r(aux, x, eta), (1, 2), chain)

    if sign == Sign.MINUS:
        lhs = r(u - v) @ ka @ r(u + v) @ kb
        rhs = kb @ r(u + v) @ ka @ r(u - v)
    else:
        lhs = r(v - u) @ ka @ r(-u - v) @ kb
        rhs = kb @ r(-u - v) @ ka @ r(v - u)
    return relative_residual(lhs, rhs)


def verify_rk(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-9, trials: int = 5
) -> List[CheckResult]:
    """Regularity, unitarity, crossing-unitarity, GYBE and (for open chains) RE/DRE."""
    eta = p.eta
    checks: List[CheckResult] = []
    ident = GradedOperator.identity(V.tensor(V))
    swap = super_permutation(V)
    checks.append(
        CheckResult.judge("regularity", "r-matrix", relative_residual(r_matrix(0, eta), eta * swap), tolerance)
    )
    for i in range(trials):
        u, v = random_pair(rng, eta)
        unitarity = r_matrix(u, eta) @ (swap @ r_matrix(-u, eta) @ swap)
        checks.append(
            CheckResult.judge(
                f"unitarity-{i}", "r-matrix",
                relative_residual(unitarity, -(u - eta) * (u + eta) * ident), tolerance, point=u,
            )
        )
        crossing = partial_super_transpose(r_matrix(-u, eta), 1) @ partial_super_transpose(
            swap @ r_matrix(u, eta) @ swap, 1
        )
        checks.append(
            CheckResult.judge(
                f"crossing-unitarity-{i}", "r-matrix",
                relative_residual(crossing, -(u**2) * ident), tolerance, point=u,
            )
        )
        checks.append(
            CheckResult.judge(f"gybe-{i}", "r-matrix", _gybe(Aux.BASE, u, v, eta), tolerance, point=u)
        )
        if p.is_open:
            checks.append(
                CheckResult.judge(
                    f"reflection-{i}", "k-matrix", _reflection(Aux.BASE, Sign.MINUS, u, v, p), tolerance, point=u
                )
            )
            checks.append(
                CheckResult.judge(
                    f"dual-reflection-{i}", "k-matrix", _reflection(Aux.BASE, Sign.PLUS, u, v, p), tolerance, point=u
                )
            )
    if p.is_open:
        checks.extend(check_grassmann_structure(p))
    return checks


def check_grassmann_structure(p: ModelParameters) -> List[CheckResult]:
    e = GRASSMANN.generator
    checks = [
        CheckResult.judge("nilpotency", "grassmann", (e @ e).norm(), 0.0),
        CheckResult.judge(
            "odd-generator", "grassmann", 0.0 if not e.is_even() else 1.0, 0.0
        ),
    ]
    if p.b_minus != 0 or p.f_minus != 0 or p.b_plus != 0 or p.f_plus != 0:
        witness = commutator(k_minus(0.3, p), k_plus(0.7, p)).norm()
        checks.append(
            CheckResult.judge(
                "k-noncommutativity",
                "grassmann",
                WITNESS_THRESHOLD / max(witness, 1e-300),
                1.0,
                note=f"commutator norm {witness:.6g}",
            )
        )
    return checks


def verify_fusion(
    p: ModelParameters, rng: np.random.Generator, tolerance: float = 1e-9, trials: int = 3
) -> List[CheckResult]:
    """Projectors, fused GYBE, closure of the hierarchy and fused RE/DRE."""
    eta = p.eta
    checks: List[CheckResult] = []
    for kind in ProjectorKind:
        try:
            proj = projector(kind, eta)
        except StructureError as e:
            logger.error(f"projector {kind.value}: {e}")
            checks.append(CheckResult.judge(f"degeneracy-{kind.value}", "projector", float("inf"), tolerance, note=str(e)))
            continue
        op = proj.operator
        checks.append(CheckResult.judge(f"degeneracy-{kind.value}", "projector", 0.0, tolerance))
        checks.append(
            CheckResult.judge(f"idempotent-{kind.value}", "projector", relative_residual(op @ op, op), tolerance)
        )
        gram = proj.basis @ proj.basis.conj().T
        checks.append(
            CheckResult.judge(
                f"orthonormal-{kind.value}", "projector",
                float(np.linalg.norm(gram - np.eye(proj.rank))), tolerance,
            )
        )
    plus = projector(ProjectorKind.P_PLUS, eta).operator
    minus = projector(ProjectorKind.P_MINUS, eta).operator
    checks.append(
        CheckResult.judge(
            "completeness", "projector",
            relative_residual(plus + minus, GradedOperator.identity(plus.domain)), tolerance,
        )
    )
    for i in range(trials):
        u, v = random_pair(rng, eta)
        for aux in (Aux.BAR, Aux.BAR_PRIME, Aux.TILDE, Aux.TILDE_PRIME):
            checks.append(
                CheckResult.judge(f"gybe-{aux.value}-{i}", "fused-r", _gybe(aux, u, v, eta), tolerance, point=u)
            )
        checks.append(
            CheckResult.judge(
                f"closure-{i}", "fused-r",
                relative_residual(fuse_r(1, 2, u, eta), fuse_r(2, 2, u, eta)), tolerance, point=u,
            )
        )
        if not p.is_open:
            continue
        for sign in Sign:
            checks.append(
                CheckResult.judge(
                    f"k-closure{sign.value}-{i}", "fused-k",
                    relative_residual(fuse_k(1, 2, sign, u, p), fuse_k(2, 2, sign, u, p)),
                    tolerance, point=u,
                )
            )
        for aux in (Aux.BAR, Aux.BAR_PRIME, Aux.TILDE, Aux.TILDE_PRIME):
            checks.append(
                CheckResult.judge(
                    f"reflection-{aux.value}-{i}", "fused-k",
                    _reflection(aux, Sign.MINUS, u, v, p), tolerance, point=u,
                )
            )
            checks.append(
                CheckResult.judge(
                    f"dual-reflection-{aux.value}-{i}", "fused-k",
                    _reflection(aux, Sign.PLUS, u, v, p), tolerance, point=u,
                )
            )
    return checks
