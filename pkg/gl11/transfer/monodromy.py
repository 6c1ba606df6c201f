from enum import Enum
from typing import Sequence, Tuple

from gl11.algebra.graded import FUNDAMENTAL, GradedOperator, GradedSpace, Parity, embed
from gl11.fusion.fused import Sign, fuse_r, fused_k, fused_parity
from gl11.model.matrices import k_minus, k_plus, r_matrix
from gl11.model.types import GRASSMANN, GrassmannContext, ModelParameters


class Aux(Enum):
    BASE = "base"
    BAR = "bar"
    BAR_PRIME = "bar_prime"
    TILDE = "tilde"
    TILDE_PRIME = "tilde_prime"

    @property
    def fusion(self) -> Tuple[int, int] | None:
        """(branch, level), or None for the fundamental space."""
        return {
            Aux.BASE: None,
            Aux.BAR: (1, 1),
            Aux.BAR_PRIME: (2, 1),
            Aux.TILDE: (1, 2),
            Aux.TILDE_PRIME: (2, 2),
        }[self]

    @property
    def parity(self) -> Parity:
        fusion = self.fusion
        if fusion is None:
            return FUNDAMENTAL
        return fused_parity(*fusion)


def aux_r(aux: Aux, u: complex, eta: complex) -> GradedOperator:
    """R_{aux,n}(u) on [aux, V]."""
    fusion = aux.fusion
    if fusion is None:
        return r_matrix(u, eta)
    return fuse_r(fusion[0], fusion[1], u, eta)


def aux_k(
    aux: Aux, sign: Sign, u: complex, p: ModelParameters, g: GrassmannContext = GRASSMANN
) -> GradedOperator:
    """K^{sign}_{aux}(u) on [grassmann, aux]."""
    fusion = aux.fusion
    if fusion is None:
        return k_plus(u, p, g) if sign == Sign.PLUS else k_minus(u, p, g)
    return fused_k(fusion[0], fusion[1], sign, u, p, g)


def site_positions(chain: GradedSpace, first: int) -> Tuple[int, ...]:
    return tuple(range(first, chain.n_factors))


def monodromy_on(
    chain: GradedSpace,
    position: int,
    sites: Sequence[int],
    p: ModelParameters,
    aux: Aux,
    u: complex,
) -> GradedOperator:
    """R_{a,s1}(u - theta_1) ... R_{a,sN}(u - theta_N) embedded in `chain`."""
    result = GradedOperator.identity(chain)
    for site, theta in zip(sites, p.theta):
        result = result @ embed(aux_r(aux, u - theta, p.eta), (position, site), chain)
    return result


def reflecting_monodromy_on(
    chain: GradedSpace,
    position: int,
    sites: Sequence[int],
    p: ModelParameters,
    aux: Aux,
    u: complex,
) -> GradedOperator:
    """R_{sN,a}(u + theta_N) ... R_{s1,a}(u + theta_1) embedded in `chain`."""
    result = GradedOperator.identity(chain)
    for site, theta in reversed(list(zip(sites, p.theta))):
        result = result @ embed(aux_r(aux, u + theta, p.eta), (position, site), chain)
    return result


def periodic_chain(p: ModelParameters, *aux: Aux) -> GradedSpace:
    return GradedSpace.chain(*(a.parity for a in aux), *([FUNDAMENTAL] * p.n))


def open_chain(p: ModelParameters, *aux: Aux) -> GradedSpace:
    return GradedSpace.chain(FUNDAMENTAL, *(a.parity for a in aux), *([FUNDAMENTAL] * p.n))


def monodromy(p: ModelParameters, aux: Aux, u: complex) -> GradedOperator:
    chain = periodic_chain(p, aux)
    return monodromy_on(chain, 0, site_positions(chain, 1), p, aux, u)


def reflecting_monodromy(p: ModelParameters, aux: Aux, u: complex) -> GradedOperator:
    chain = periodic_chain(p, aux)
    return reflecting_monodromy_on(chain, 0, site_positions(chain, 1), p, aux, u)
