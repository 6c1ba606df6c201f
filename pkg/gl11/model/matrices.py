import numpy as np

from gl11.algebra.graded import (
    FUNDAMENTAL,
    GradedOperator,
    GradedSpace,
    super_permutation,
    super_tensor,
)
from gl11.errors import DomainError, StructureError
from gl11.model.types import GRASSMANN, GrassmannContext, ModelParameters

V = GradedSpace.of(FUNDAMENTAL)
VV = V.tensor(V)

BODY_TOLERANCE = 1e-12


def _unit(i: int, j: int) -> GradedOperator:
    e = np.zeros((2, 2), dtype=complex)
    e[i, j] = 1.0
    return GradedOperator.on(V, e)


SIGMA = GradedOperator.on(V, np.diag([1.0, -1.0]).astype(complex))


def r_matrix(u: complex, eta: complex) -> GradedOperator:
    """R(u) = u I + eta P on V⊗V."""
    return u * GradedOperator.identity(VV) + eta * super_permutation(V)


def boundary_generator(
    p: ModelParameters, sign: int, g: GrassmannContext = GRASSMANN
) -> GradedOperator:
    """M such that K^{sign}(u) = I + u M on [grassmann, V]."""
    if sign not in (1, -1):
        raise DomainError(f"boundary sign must be +1 or -1, got {sign}")
    a, b, f = (
        (p.a_plus, p.b_plus, p.f_plus) if sign > 0 else (p.a_minus, p.b_minus, p.f_minus)
    )
    ident = GradedOperator.identity(g.aux_space)
    return (
        a * super_tensor(ident, SIGMA)
        + b * super_tensor(g.generator, _unit(0, 1))
        + f * super_tensor(g.adjoint, _unit(1, 0))
    )


def _k(u: complex, p: ModelParameters, sign: int, g: GrassmannContext) -> GradedOperator:
    if not p.is_open:
        raise DomainError("K-matrices need an open boundary")
    m = boundary_generator(p, sign, g)
    return GradedOperator.identity(m.domain) + u * m


def k_minus(u: complex, p: ModelParameters, g: GrassmannContext = GRASSMANN) -> GradedOperator:
    return _k(u, p, -1, g)


def k_plus(u: complex, p: ModelParameters, g: GrassmannContext = GRASSMANN) -> GradedOperator:
    return _k(u, p, 1, g)


def grassmann_body(a: GradedOperator, tol: float = BODY_TOLERANCE) -> GradedOperator:
    """
    The E-free part of an operator on [grassmann, W].

    E-linear terms sit in the (1,0) aux block; a nonzero (0,1) block cannot
    arise from products linear in E and is reported as a structural error.
    """
    space = a.domain
    if space.n_factors < 1 or space.factors[0] != FUNDAMENTAL:
        raise StructureError("operator has no leading Grassmann factor")
    rest = GradedSpace(space.factors[1:])
    d = rest.dim
    blocks = a.entries.reshape(2, d, 2, d)
    upper = float(np.max(np.abs(blocks[0, :, 1, :]))) if d else 0.0
    scale = max(float(np.max(np.abs(a.entries))), 1.0)
    if upper > tol * scale:
        raise StructureError(
            f"Grassmann (0,1) block is nonzero ({upper:.3e}); sign convention broken"
        )
    return GradedOperator.on(rest, blocks[0, :, 0, :].copy())
