import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from gl11.errors import DomainError, StructureError

Parity = Tuple[int, ...]

# gl(1|1) fundamental: p(1) = 0, p(2) = 1
FUNDAMENTAL: Parity = (0, 1)


def koszul_sign(a: int, b: int) -> int:
    """(-1)^(a*b) as an exact integer."""
    return -1 if (a * b) % 2 else 1


def _flat_parity(factors: Tuple[Parity, ...]) -> Parity:
    if not factors:
        return (0,)
    return tuple(sum(c) % 2 for c in itertools.product(*factors))


@dataclass(frozen=True)
class GradedSpace:
    """
    Z2-graded space built from tensor factors.

    The basis of a product is lexicographic with the leftmost factor slowest, and
    the parity of a product vector is the sum of the factor parities mod 2.
    """

    factors: Tuple[Parity, ...]
    parity: Parity = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for f in self.factors:
            if not f or any(p not in (0, 1) for p in f):
                raise StructureError(f"invalid parity list: {f}")
        object.__setattr__(self, "parity", _flat_parity(self.factors))

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    @classmethod
    def of(cls, parity: Sequence[int]) -> "GradedSpace":
        return cls((tuple(int(p) for p in parity),))

    @classmethod
    def chain(cls, *parities: Sequence[int]) -> "GradedSpace":
        return cls(tuple(tuple(int(p) for p in par) for par in parities))

    def tensor(self, *others: "GradedSpace") -> "GradedSpace":
        factors = self.factors
        for o in others:
            factors = factors + o.factors
        return GradedSpace(factors)

    def select(self, positions: Sequence[int]) -> "GradedSpace":
        return GradedSpace(tuple(self.factors[p] for p in positions))

    def flat_equal(self, other: "GradedSpace") -> bool:
        return self.parity == other.parity


SCALAR_SPACE = GradedSpace(())


@dataclass(frozen=True)
class GradedOperator:
    domain: GradedSpace
    codomain: GradedSpace
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (self.codomain.dim, self.domain.dim):
            raise StructureError(
                f"entries of shape {entries.shape} do not match spaces "
                f"({self.codomain.dim}, {self.domain.dim})"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def space(self) -> GradedSpace:
        if self.domain != self.codomain:
            raise StructureError("operator is not an endomorphism")
        return self.domain

    @classmethod
    def on(cls, space: GradedSpace, entries: np.ndarray) -> "GradedOperator":
        return cls(space, space, entries)

    @classmethod
    def identity(cls, space: GradedSpace) -> "GradedOperator":
        return cls(space, space, np.eye(space.dim, dtype=complex))

    @classmethod
    def zeros(cls, space: GradedSpace) -> "GradedOperator":
        return cls(space, space, np.zeros((space.dim, space.dim), dtype=complex))

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        if not self.domain.flat_equal(other.codomain):
            raise StructureError(
                f"cannot compose: domain {self.domain.parity} "
                f"vs codomain {other.codomain.parity}"
            )
        return GradedOperator(other.domain, self.codomain, self.entries @ other.entries)

    def _check_same(self, other: "GradedOperator") -> None:
        if not (
            self.domain.flat_equal(other.domain)
            and self.codomain.flat_equal(other.codomain)
        ):
            raise StructureError("operators act on different spaces")

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._check_same(other)
        return GradedOperator(self.domain, self.codomain, self.entries + other.entries)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        self._check_same(other)
        return GradedOperator(self.domain, self.codomain, self.entries - other.entries)

    def __mul__(self, scalar: complex) -> "GradedOperator":
        return GradedOperator(self.domain, self.codomain, self.entries * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "GradedOperator":
        return GradedOperator(self.domain, self.codomain, self.entries / scalar)

    def __neg__(self) -> "GradedOperator":
        return GradedOperator(self.domain, self.codomain, -self.entries)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def dagger(self) -> "GradedOperator":
        return GradedOperator(self.codomain, self.domain, self.entries.conj().T)

    def scalar(self) -> complex:
        if self.entries.shape != (1, 1):
            raise StructureError("operator is not a scalar")
        return complex(self.entries[0, 0])

    def is_even(self, tol: float = 0.0) -> bool:
        pc = np.asarray(self.codomain.parity)
        pd = np.asarray(self.domain.parity)
        odd = pc[:, None] != pd[None, :]
        return bool(np.all(np.abs(self.entries[odd]) <= tol))

    def with_spaces(self, domain: GradedSpace, codomain: GradedSpace) -> "GradedOperator":
        return GradedOperator(domain, codomain, self.entries)


def commutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    return a @ b - b @ a


def relative_residual(lhs: GradedOperator | np.ndarray, rhs: GradedOperator | np.ndarray) -> float:
    """||L - R||_F / max(||L||_F, ||R||_F); zero when both sides vanish."""
    left = lhs.entries if isinstance(lhs, GradedOperator) else np.asarray(lhs)
    right = rhs.entries if isinstance(rhs, GradedOperator) else np.asarray(rhs)
    scale = max(float(np.linalg.norm(left)), float(np.linalg.norm(right)))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(left - right)) / scale


@lru_cache(maxsize=None)
def _tensor_signs(pa: Parity, pb: Parity) -> np.ndarray:
    signs = np.empty((len(pa), len(pa), len(pb)), dtype=np.int8)
    for i, j, k in itertools.product(range(len(pa)), range(len(pa)), range(len(pb))):
        signs[i, j, k] = koszul_sign((pa[i] + pa[j]) % 2, pb[k])
    signs.setflags(write=False)
    return signs


def super_tensor(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """(A ⊗s B)[(i,k),(j,l)] = (-1)^{[p(i)+p(j)]p(k)} A[i,j] B[k,l]"""
    if a.domain != a.codomain or b.domain != b.codomain:
        raise StructureError("super tensor is defined here for endomorphisms")
    da, db = a.domain.dim, b.domain.dim
    signs = _tensor_signs(a.domain.parity, b.domain.parity)
    full = np.einsum("ij,kl,ijk->ikjl", a.entries, b.entries, signs)
    return GradedOperator.on(
        a.domain.tensor(b.domain), full.reshape(da * db, da * db)
    )


@lru_cache(maxsize=None)
def _swap_entries(pv: Parity, pw: Parity) -> np.ndarray:
    dv, dw = len(pv), len(pw)
    m = np.zeros((dw * dv, dv * dw), dtype=complex)
    for a, b in itertools.product(range(dv), range(dw)):
        m[b * dv + a, a * dw + b] = koszul_sign(pv[a], pw[b])
    m.setflags(write=False)
    return m


def super_permutation(v: GradedSpace, w: GradedSpace | None = None) -> GradedOperator:
    """P|a,b> = (-1)^{p(a)p(b)} |b,a>, mapping V⊗W to W⊗V."""
    w = v if w is None else w
    return GradedOperator(
        v.tensor(w), w.tensor(v), _swap_entries(v.parity, w.parity).copy()
    )


@lru_cache(maxsize=None)
def _reorder_entries(
    factors: Tuple[Parity, ...], order: Tuple[int, ...]
) -> np.ndarray:
    # bubble sort into `order` by adjacent super permutations; even, so kron is exact
    dims = [len(f) for f in factors]
    current = list(range(len(factors)))
    total = int(np.prod(dims)) if dims else 1
    result = np.eye(total, dtype=complex)
    target = list(order)
    changed = True
    while changed:
        changed = False
        for i in range(len(current) - 1):
            if target.index(current[i]) > target.index(current[i + 1]):
                left = int(np.prod([dims[c] for c in current[:i]])) if i else 1
                right = (
                    int(np.prod([dims[c] for c in current[i + 2 :]]))
                    if i + 2 < len(current)
                    else 1
                )
                swap = _swap_entries(factors[current[i]], factors[current[i + 1]])
                step = np.kron(np.kron(np.eye(left), swap), np.eye(right))
                result = step @ result
                current[i], current[i + 1] = current[i + 1], current[i]
                changed = True
    result.setflags(write=False)
    return result


def embed(
    a: GradedOperator, positions: Sequence[int], chain: GradedSpace
) -> GradedOperator:
    """
    Embed `a` acting on the factors `positions` (in that order) of `chain`.

    Realized as Π^T (A ⊗s I_rest) Π where Π is the signed reordering bringing the
    selected factors to the front.
    """
    positions = tuple(positions)
    if len(set(positions)) != len(positions) or any(
        p < 0 or p >= chain.n_factors for p in positions
    ):
        raise DomainError(f"invalid positions {positions} for {chain.n_factors} factors")
    selected = chain.select(positions)
    if a.domain.factors != selected.factors or a.codomain.factors != selected.factors:
        if not (a.domain.flat_equal(selected) and a.codomain.flat_equal(selected)):
            raise StructureError(
                f"operator space does not match factors {positions} of the chain"
            )
        a = a.with_spaces(selected, selected)
    rest = tuple(i for i in range(chain.n_factors) if i not in positions)
    if rest:
        rest_space = chain.select(rest)
        big = super_tensor(a, GradedOperator.identity(rest_space))
    else:
        big = a
    order = positions + rest
    if order == tuple(range(chain.n_factors)):
        return big.with_spaces(chain, chain)
    pi = _reorder_entries(chain.factors, order)
    return GradedOperator.on(chain, pi.T @ big.entries @ pi)


def super_trace(a: GradedOperator, over: Sequence[int]) -> GradedOperator:
    """
    Partial super trace over the given factors.

    Each traced factor is moved to the front and contracted with Σ_α (-1)^{p(α)};
    tracing every factor returns a 1x1 operator on the scalar space.
    """
    if a.domain != a.codomain:
        raise StructureError("super trace of a non-square operator")
    over = sorted(set(over), reverse=True)
    current = a
    for f in over:
        space = current.domain
        if f < 0 or f >= space.n_factors:
            raise DomainError(f"factor {f} out of range")
        rest = tuple(i for i in range(space.n_factors) if i != f)
        order = (f,) + rest
        if order != tuple(range(space.n_factors)):
            pi = _reorder_entries(space.factors, order)
            m = pi @ current.entries @ pi.T
        else:
            m = current.entries
        df = len(space.factors[f])
        remaining = space.select(rest) if rest else SCALAR_SPACE
        blocks = m.reshape(df, remaining.dim, df, remaining.dim)
        reduced = np.zeros((remaining.dim, remaining.dim), dtype=complex)
        for alpha, p in enumerate(space.factors[f]):
            reduced += koszul_sign(p, 1) * blocks[alpha, :, alpha, :]
        current = GradedOperator.on(remaining, reduced)
    return current


def super_trace_full(a: GradedOperator) -> complex:
    return super_trace(a, range(a.domain.n_factors)).scalar()


def partial_super_transpose(a: GradedOperator, factor: int) -> GradedOperator:
    """A^{st_k}: transpose in factor k (1 or 2) with sign (-1)^{p(i)[p(i)+p(j)]}."""
    space = a.domain
    if a.domain != a.codomain or space.n_factors != 2:
        raise DomainError("partial super transpose needs an operator on two factors")
    if factor not in (1, 2):
        raise DomainError(f"factor must be 1 or 2, got {factor}")
    p1, p2 = space.factors
    d1, d2 = len(p1), len(p2)
    t = a.entries.reshape(d1, d2, d1, d2)
    out = np.empty_like(t)
    for i, k, j, l in itertools.product(range(d1), range(d2), range(d1), range(d2)):
        if factor == 1:
            # (i,j) of the first factor swap places
            s = koszul_sign(p1[i], (p1[i] + p1[j]) % 2)
            out[i, k, j, l] = s * t[j, k, i, l]
        else:
            s = koszul_sign(p2[k], (p2[k] + p2[l]) % 2)
            out[i, k, j, l] = s * t[i, l, j, k]
    return GradedOperator.on(space, out.reshape(d1 * d2, d1 * d2))


def compress(a: GradedOperator, isometry: np.ndarray, position: int, fused: Parity) -> GradedOperator:
    """
    Restrict an operator to a projected pair of adjacent factors.

    `isometry` is the 2x4 matrix whose rows are the projected basis vectors of
    factors (position, position + 1); the pair is replaced by one factor with
    parities `fused`. The isometry is even, so no signs arise.
    """
    space = a.domain
    if position < 0 or position + 1 >= space.n_factors:
        raise DomainError(f"cannot compress factors {position}, {position + 1}")
    dims = [len(f) for f in space.factors]
    left = int(np.prod(dims[:position])) if position else 1
    right = int(np.prod(dims[position + 2 :])) if position + 2 < len(dims) else 1
    w = np.kron(np.kron(np.eye(left), isometry), np.eye(right))
    factors = space.factors[:position] + (tuple(fused),) + space.factors[position + 2 :]
    target = GradedSpace(factors)
    return GradedOperator.on(target, w @ a.entries @ w.conj().T)


def clear_caches() -> None:
    _tensor_signs.cache_clear()
    _swap_entries.cache_clear()
    _reorder_entries.cache_clear()
