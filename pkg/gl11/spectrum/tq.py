"""Eigenvalues of the transfer matrices from Bethe roots, and the energies they give."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from gl11.errors import DomainError
from gl11.model.types import ModelParameters
from gl11.spectrum.bae import BetheRootSet, alpha_polynomial
from gl11.transfer.monodromy import Aux

POLE_CLEARANCE = 1e-10


def _a(p: ModelParameters, u: complex) -> complex:
    return complex(np.prod([u - t for t in p.theta]))


def _nonzero(value: complex, what: str) -> complex:
    if abs(value) <= POLE_CLEARANCE:
        raise DomainError(f"{what} vanishes at the evaluation point; shift the node")
    return value


def q_function(roots: BetheRootSet, p: ModelParameters, u: complex) -> complex:
    """Periodic: prod_k (u - mu_k). Open: prod_k (u - lambda_k)(u + lambda_k + eta)."""
    if p.is_open:
        return complex(np.prod([(u - lam) * (u + lam + p.eta) for lam in roots.finite_roots]))
    return complex(np.prod([u - mu for mu in roots.finite_roots]))


def _q_ratio(roots: BetheRootSet, p: ModelParameters, numerator: complex, denominator: complex) -> complex:
    for r in roots.finite_roots:
        for zero in (r, -r - p.eta) if p.is_open else (r,):
            if abs(denominator - zero) <= POLE_CLEARANCE:
                raise DomainError(f"u = {denominator:.12g} sits on the Bethe root {r:.12g}; shift the node")
    return q_function(roots, p, numerator) / q_function(roots, p, denominator)


def _periodic_lambda(roots: BetheRootSet, p: ModelParameters, level: Aux, u: complex) -> complex:
    eta = p.eta
    if level == Aux.BASE:
        return (_a(p, u) - _a(p, u - eta)) * _q_ratio(roots, p, u + eta, u)
    if level in (Aux.BAR, Aux.BAR_PRIME):
        value = (_a(p, u - 0.5 * eta) - _a(p, u - 1.5 * eta)) * _q_ratio(
            roots, p, u + 1.5 * eta, u - 0.5 * eta
        )
        return value if level == Aux.BAR else -value
    return (_a(p, u - 2 * eta) - _a(p, u - eta)) * _q_ratio(roots, p, u + 2 * eta, u - eta)


def _open_lambda(roots: BetheRootSet, p: ModelParameters, level: Aux, u: complex) -> complex:
    eta = p.eta
    alpha = alpha_polynomial(p)

    def bracket(x: complex) -> complex:
        return complex(alpha(x) - alpha(-x - eta))

    if level == Aux.BASE:
        prefactor = 2 * u / _nonzero(2 * u + eta, "2u+eta")
        return prefactor * bracket(u) * _q_ratio(roots, p, u - eta, u)
    if level in (Aux.BAR, Aux.BAR_PRIME):
        prefactor = -4 * u / _nonzero(u + eta, "u+eta")
        value = prefactor * bracket(u + 0.5 * eta) * _q_ratio(roots, p, u - 1.5 * eta, u + 0.5 * eta)
        return value if level == Aux.BAR else -value
    prefactor = -8 * u / _nonzero(2 * u + 3 * eta, "2u+3eta")
    return prefactor * bracket(u + eta) * _q_ratio(roots, p, u - 2 * eta, u + eta)


def tq_lambda(roots: BetheRootSet, p: ModelParameters, level: Aux, u: complex) -> complex:
    """
    Eigenvalue of the transfer matrix at the given level for the state `roots`.

    The root at infinity contributes 1 to every Q ratio; TILDE and TILDE_PRIME
    share their eigenvalues.
    """
    if roots.kind != p.boundary:
        raise DomainError(f"{roots.kind.value} roots used with a {p.boundary.value} chain")
    if p.is_open:
        return _open_lambda(roots, p, level, u)
    return _periodic_lambda(roots, p, level, u)


def energy(roots: BetheRootSet, p: ModelParameters) -> complex:
    """
    Periodic: sum_k eta^2 / ((eta - mu_k) mu_k) - N.
    Open: eta^N sum_k 1/(lambda_k (lambda_k + eta)) + eta^{N-2}/2 (2N - 1 + a- eta - 1/(1 + a+ eta)).
    """
    if not p.is_homogeneous():
        raise DomainError("energies are given by the Bethe roots only at theta = 0")
    if p.n < 2:
        raise DomainError(f"energies need at least two sites, got {p.n}")
    eta = p.eta
    if not p.is_open:
        total = 0j
        for mu in roots.finite_roots:
            total += eta**2 / (_nonzero(eta - mu, "eta-mu") * _nonzero(mu, "mu"))
        return total - p.n
    total = 0j
    for lam in roots.finite_roots:
        total += 1 / (_nonzero(lam, "lambda") * _nonzero(lam + eta, "lambda+eta"))
    plus = _nonzero(1 + p.a_plus * eta, "1+a+ eta")
    return eta**p.n * total + 0.5 * eta ** (p.n - 2) * (2 * p.n - 1 + p.a_minus * eta - 1 / plus)


@dataclass(frozen=True)
class SpectralLine:
    """One Bethe state together with its energy (None away from theta = 0)."""

    roots: BetheRootSet
    parameters: ModelParameters
    energy: Optional[complex] = None


def spectral_line(roots: BetheRootSet, p: ModelParameters) -> SpectralLine:
    e = energy(roots, p) if p.is_homogeneous() and p.n >= 2 else None
    return SpectralLine(roots, p, e)
