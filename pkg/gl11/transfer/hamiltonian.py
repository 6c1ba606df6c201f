import logging

from gl11.algebra.dense import lu_solve
from gl11.algebra.graded import (
    FUNDAMENTAL,
    GradedOperator,
    GradedSpace,
    embed,
    relative_residual,
    super_permutation,
)
from gl11.errors import DomainError
from gl11.model.matrices import V, boundary_generator, grassmann_body
from gl11.model.types import Boundary, GRASSMANN, GrassmannContext, ModelParameters
from gl11.report import CheckResult
from gl11.transfer.monodromy import Aux
from gl11.transfer.transfer import transfer

logger = logging.getLogger(__name__)

PERIODIC_STEP = 1e-5
OPEN_STEP = 1e-4


def _bonds(chain: GradedSpace, first: int, n: int, periodic: bool) -> GradedOperator:
    h = GradedOperator.zeros(chain)
    swap = super_permutation(V)
    pairs = [(first + j, first + j + 1) for j in range(n - 1)]
    if periodic:
        pairs.append((first + n - 1, first))
    for a, b in pairs:
        h = h + embed(swap, (a, b), chain)
    return h


def hamiltonian(p: ModelParameters, g: GrassmannContext = GRASSMANN) -> GradedOperator:
    """
    Periodic: sum_j P_{j,j+1} with P_{N,N+1} = P_{N,1}.
    Open, on [grassmann, sites]: eta^{N-2} sum_j P_{j,j+1} plus the boundary terms
    eta^{N-1}/(2(1+a+ eta)) M+ on site 1 and eta^{N-1}/2 M- on site N.
    """
    if p.n < 2:
        raise DomainError(f"Hamiltonian needs at least two sites, got {p.n}")
    if p.boundary == Boundary.PERIODIC:
        chain = GradedSpace.chain(*([FUNDAMENTAL] * p.n))
        return _bonds(chain, 0, p.n, periodic=True)
    eta = p.eta
    chain = GradedSpace.chain(*([FUNDAMENTAL] * (p.n + 1)))
    plus_factor = 1 + p.a_plus * eta
    if abs(plus_factor) <= 1e-12:
        raise DomainError("Hamiltonian normalization 1+a+ eta vanishes")
    bulk = eta ** (p.n - 2) * _bonds(chain, 1, p.n, periodic=False)
    left = embed(boundary_generator(p, 1, g), (0, 1), chain)
    right = embed(boundary_generator(p, -1, g), (0, p.n), chain)
    return bulk + (eta ** (p.n - 1) / (2 * plus_factor)) * left + (eta ** (p.n - 1) / 2) * right


def log_derivative_hamiltonian(p: ModelParameters) -> GradedOperator:
    """eta t'(0) t(0)^{-1} by central differences and an LU solve."""
    h = PERIODIC_STEP * p.eta
    t0 = transfer(p, Aux.BASE, 0.0)
    derivative = (transfer(p, Aux.BASE, h) - transfer(p, Aux.BASE, -h)) / (2 * h)
    # X t0 = t', i.e. t0^T X^T = t'^T
    x = lu_solve(t0.entries.T, derivative.entries.T).T
    return GradedOperator.on(t0.domain, p.eta * x)


def second_derivative_hamiltonian(p: ModelParameters, g: GrassmannContext = GRASSMANN) -> GradedOperator:
    """t''(0) / (8 eta^N (1 + a+ eta)) by a second difference."""
    h = OPEN_STEP * p.eta
    second = (
        transfer(p, Aux.BASE, h, g)
        - 2 * transfer(p, Aux.BASE, 0.0, g)
        + transfer(p, Aux.BASE, -h, g)
    ) / (h * h)
    return second / (8 * p.eta**p.n * (1 + p.a_plus * p.eta))


def check_hamiltonian(p: ModelParameters, tolerance: float = 1e-5) -> CheckResult:
    q = p.homogeneous()
    direct = hamiltonian(q)
    if q.boundary == Boundary.PERIODIC:
        oracle = log_derivative_hamiltonian(q)
        name = "log-derivative"
    else:
        oracle = second_derivative_hamiltonian(q)
        name = "second-derivative"
    residual = relative_residual(direct, oracle)
    logger.debug(f"hamiltonian {name} residual {residual:.3e}")
    return CheckResult.judge(name, "hamiltonian", residual, tolerance)


def body_hamiltonian(p: ModelParameters) -> GradedOperator:
    h = hamiltonian(p)
    if p.boundary == Boundary.OPEN:
        return grassmann_body(h)
    return h
