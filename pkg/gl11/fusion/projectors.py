from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from gl11.algebra.graded import GradedOperator, GradedSpace, Parity

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)

# fused auxiliary spaces
BAR_PARITY: Parity = (0, 1)
BAR_PRIME_PARITY: Parity = (1, 0)
TILDE_PARITY: Parity = (1, 0)


class ProjectorKind(Enum):
    P_PLUS = "P+"
    P_MINUS = "P-"
    PP_MINUS = "PP-"
    PC_PLUS = "PC+"


@dataclass(frozen=True)
class Projector:
    """
    Rank-2 projector on a pair of factors.

    `basis` holds the image vectors as rows (the isometry W), `factors` the
    parities of the two factors it acts on, `parity` those of the image basis.
    """

    kind: ProjectorKind
    basis: np.ndarray
    factors: Tuple[Parity, Parity]
    parity: Parity

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(self.factors)

    @property
    def operator(self) -> GradedOperator:
        w = self.basis
        return GradedOperator.on(self.space, w.conj().T @ w)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]


def _vectors(kind: ProjectorKind) -> np.ndarray:
    if kind == ProjectorKind.P_PLUS:
        # |11>, (|12> + |21>)/sqrt2
        return np.array([[1, 0, 0, 0], [0, 1 / SQRT2, 1 / SQRT2, 0]])
    if kind == ProjectorKind.P_MINUS:
        # (|12> - |21>)/sqrt2, |22>
        return np.array([[0, 1 / SQRT2, -1 / SQRT2, 0], [0, 0, 0, 1]])
    if kind == ProjectorKind.PP_MINUS:
        # on V_bar ⊗ V: (sqrt2 |psi1,2> - |psi2,1>)/sqrt3, |psi2,2>
        return np.array([[0, SQRT2 / SQRT3, -1 / SQRT3, 0], [0, 0, 0, 1]])
    if kind == ProjectorKind.PC_PLUS:
        # on V_bar' ⊗ V: |psibar1,1>, (-|psibar1,2> + sqrt2 |psibar2,1>)/sqrt3
        return np.array([[1, 0, 0, 0], [0, -1 / SQRT3, SQRT2 / SQRT3, 0]])
    raise ValueError(f"Unknown projector: {kind}")


_FACTORS = {
    ProjectorKind.P_PLUS: ((0, 1), (0, 1)),
    ProjectorKind.P_MINUS: ((0, 1), (0, 1)),
    ProjectorKind.PP_MINUS: (BAR_PARITY, (0, 1)),
    ProjectorKind.PC_PLUS: (BAR_PRIME_PARITY, (0, 1)),
}

_PARITY = {
    ProjectorKind.P_PLUS: BAR_PARITY,
    ProjectorKind.P_MINUS: BAR_PRIME_PARITY,
    ProjectorKind.PP_MINUS: TILDE_PARITY,
    ProjectorKind.PC_PLUS: TILDE_PARITY,
}


def build_projector(kind: ProjectorKind) -> Projector:
    """Projector from its explicit basis, without the degeneracy cross-check."""
    basis = np.asarray(_vectors(kind), dtype=complex)
    return Projector(kind, basis, _FACTORS[kind], _PARITY[kind])  # type: ignore[arg-type]
