from dataclasses import dataclass
from typing import Callable, Sequence

from gl11.algebra.graded import GradedOperator, GradedSpace, embed, super_trace
from gl11.fusion.fused import Sign
from gl11.model.types import Boundary, GRASSMANN, GrassmannContext, ModelParameters
from gl11.transfer.monodromy import (
    Aux,
    aux_k,
    monodromy_on,
    open_chain,
    periodic_chain,
    reflecting_monodromy_on,
    site_positions,
)


def double_row_on(
    chain: GradedSpace,
    position: int,
    sites: Sequence[int],
    p: ModelParameters,
    aux: Aux,
    u: complex,
    g: GrassmannContext = GRASSMANN,
) -> GradedOperator:
    """K+(u) T(u) K-(u) T^(u) with the Grassmann factor at position 0 of `chain`."""
    return (
        embed(aux_k(aux, Sign.PLUS, u, p, g), (0, position), chain)
        @ monodromy_on(chain, position, sites, p, aux, u)
        @ embed(aux_k(aux, Sign.MINUS, u, p, g), (0, position), chain)
        @ reflecting_monodromy_on(chain, position, sites, p, aux, u)
    )


def transfer(
    p: ModelParameters, aux: Aux, u: complex, g: GrassmannContext = GRASSMANN
) -> GradedOperator:
    """
    Transfer matrix with the given auxiliary space.

    Periodic: str_a T_a(u), acting on the sites.
    Open: str_a {K+_a(u) T_a(u) K-_a(u) T^_a(u)}, acting on [grassmann, sites].
    """
    if p.boundary == Boundary.PERIODIC:
        chain = periodic_chain(p, aux)
        t = monodromy_on(chain, 0, site_positions(chain, 1), p, aux, u)
        return super_trace(t, [0])
    chain = open_chain(p, aux)
    return super_trace(double_row_on(chain, 1, site_positions(chain, 2), p, aux, u, g), [1])


@dataclass(frozen=True)
class TransferFamily:
    kind: Boundary
    level: Aux
    evaluator: Callable[[complex], GradedOperator]
    degree_bound: int

    def __call__(self, u: complex) -> GradedOperator:
        return self.evaluator(u)


def transfer_family(
    p: ModelParameters, aux: Aux = Aux.BASE, g: GrassmannContext = GRASSMANN
) -> TransferFamily:
    degree = p.n - 1 if p.boundary == Boundary.PERIODIC else 2 * p.n + 2
    return TransferFamily(p.boundary, aux, lambda u: transfer(p, aux, u, g), degree)
