import itertools
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from gl11.errors import ConvergenceError, DomainError
from gl11.model.types import Boundary, ModelParameters
from gl11.spectrum.aberth import aberth_roots, trim

logger = logging.getLogger(__name__)

DEDUP_TOLERANCE = 1e-8
PAIRING_TOLERANCE = 1e-7
BAE_TOLERANCE = 1e-9
KEY_DIGITS = 9


@dataclass(frozen=True)
class BetheRootSet:
    kind: Boundary
    finite_roots: Tuple[complex, ...] = ()
    has_infinite_root: bool = False

    def __post_init__(self) -> None:
        if self.has_infinite_root and self.kind != Boundary.PERIODIC:
            raise DomainError("only periodic chains carry a root at infinity")

    @property
    def m(self) -> int:
        return len(self.finite_roots) + int(self.has_infinite_root)

    @property
    def key(self) -> Tuple[int, bool, Tuple[Tuple[float, float], ...]]:
        rounded = sorted(
            (round(r.real, KEY_DIGITS) + 0.0, round(r.imag, KEY_DIGITS) + 0.0)
            for r in self.finite_roots
        )
        return len(self.finite_roots), self.has_infinite_root, tuple(rounded)


def alpha_polynomial(p: ModelParameters) -> Polynomial:
    """(1 + u a-)(1 + (u + eta) a+) prod_j (u + theta_j + eta)(u - theta_j + eta)"""
    eta = p.eta
    roots = [-t - eta for t in p.theta] + [t - eta for t in p.theta]
    return (
        Polynomial([1, p.a_minus])
        * Polynomial([1 + eta * p.a_plus, p.a_plus])
        * Polynomial.fromroots(roots)
    )


def dedup(roots: Sequence[complex], tol: float = DEDUP_TOLERANCE) -> List[complex]:
    kept: List[complex] = []
    for r in roots:
        if any(abs(r - k) <= tol * (1 + abs(k)) for k in kept):
            logger.warning(f"dropping clustered root {r:.12g}")
            continue
        kept.append(r)
    return kept


def homogeneous_periodic_roots(n: int, eta: complex) -> List[complex]:
    """mu = eta / (1 - omega) for the nontrivial N-th roots of unity omega."""
    return [eta / (1 - np.exp(2j * np.pi * k / n)) for k in range(1, n)]


def periodic_bae_residual(p: ModelParameters, mu: complex) -> float:
    ratio = complex(np.prod([(mu - t - p.eta) / (mu - t) for t in p.theta]))
    return abs(ratio - 1)


def solve_bae_periodic(p: ModelParameters) -> List[complex]:
    """Roots of prod_j (mu - theta_j - eta) - prod_j (mu - theta_j), degree N-1."""
    eta = p.eta
    theta = list(p.theta)
    d = Polynomial.fromroots([t + eta for t in theta]) - Polynomial.fromroots(theta)
    coeffs = trim(d.coef, 1e-14)
    roots = dedup(aberth_roots(coeffs))
    for mu in roots:
        residual = periodic_bae_residual(p, mu)
        if residual > BAE_TOLERANCE:
            raise ConvergenceError(f"periodic root {mu:.12g} has BAE residual {residual:.3e}")
    if p.is_homogeneous():
        for mu in roots:
            closest = min(abs(mu - c) for c in homogeneous_periodic_roots(p.n, eta))
            if closest > BAE_TOLERANCE * (1 + abs(mu)):
                raise ConvergenceError(
                    f"root {mu:.12g} misses the closed form eta/(1-omega) by {closest:.3e}"
                )
    logger.debug(f"periodic BAE: {len(roots)} roots for N={p.n}")
    return sorted(roots, key=lambda r: (round(r.real, KEY_DIGITS), round(r.imag, KEY_DIGITS)))


def open_bae_residual(p: ModelParameters, lam: complex) -> float:
    alpha = alpha_polynomial(p)
    mirrored = complex(alpha(-lam - p.eta))
    value = complex(alpha(lam))
    if mirrored == 0:
        return abs(value)
    return abs(value / mirrored - 1)


def _pair_roots(roots: List[complex], eta: complex) -> List[complex]:
    """One representative per lambda <-> -lambda-eta pair: smaller (imag, real)."""
    remaining = list(roots)
    representatives = []
    while remaining:
        r = remaining.pop(0)
        partner = -r - eta
        distances = [abs(s - partner) for s in remaining]
        if not distances or min(distances) > PAIRING_TOLERANCE * (1 + abs(r)):
            raise ConvergenceError(f"open root {r:.12g} has no partner -lambda-eta")
        s = remaining.pop(int(np.argmin(distances)))
        representatives.append(min(r, s, key=lambda z: (z.imag, z.real)))
    return representatives


def solve_bae_open(p: ModelParameters) -> List[complex]:
    """
    Roots of alpha(lambda) - alpha(-lambda - eta) with the trivial root -eta/2
    removed, one representative per pair.
    """
    if not p.is_open:
        raise DomainError("open Bethe equations need an open boundary")
    eta = p.eta
    alpha = alpha_polynomial(p)
    mirrored = alpha(Polynomial([-eta, -1]))
    d = Polynomial(trim((alpha - mirrored).coef, 1e-13))
    quotient, remainder = divmod(d, Polynomial([0.5 * eta, 1]))
    scale = float(np.max(np.abs(d.coef)))
    if float(np.max(np.abs(remainder.coef))) > 1e-9 * scale:
        raise ConvergenceError("lambda = -eta/2 is not a root of the open Bethe polynomial")
    roots = dedup(aberth_roots(quotient.coef))
    representatives = _pair_roots(roots, eta)
    for lam in representatives:
        residual = open_bae_residual(p, lam)
        if residual > BAE_TOLERANCE:
            raise ConvergenceError(f"open root {lam:.12g} has BAE residual {residual:.3e}")
    logger.debug(f"open BAE: {len(representatives)} root pairs for N={p.n}")
    return sorted(representatives, key=lambda r: (round(r.imag, KEY_DIGITS), round(r.real, KEY_DIGITS)))


def solve_bae(p: ModelParameters) -> List[complex]:
    return solve_bae_open(p) if p.is_open else solve_bae_periodic(p)


def enumerate_states(p: ModelParameters, candidates: Sequence[complex]) -> List[BetheRootSet]:
    """
    Every subset of the candidates; periodic subsets come with and without the
    root at infinity.
    """
    states = []
    for size in range(len(candidates) + 1):
        for subset in itertools.combinations(candidates, size):
            if p.is_open:
                states.append(BetheRootSet(Boundary.OPEN, tuple(subset)))
            else:
                states.append(BetheRootSet(Boundary.PERIODIC, tuple(subset), False))
                states.append(BetheRootSet(Boundary.PERIODIC, tuple(subset), True))
    return sorted(states, key=lambda s: s.key)
