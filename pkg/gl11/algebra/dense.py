import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from gl11.algebra.graded import GradedOperator
from gl11.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_NODE_SHIFT = 0.37
NODE_CLEARANCE = 1e-6


@dataclass(frozen=True)
class LUFactors:
    lu: np.ndarray
    pivots: np.ndarray
    sign: int
    singular: bool


def lu_decompose(m: np.ndarray) -> LUFactors:
    """
    Crout-style LU with partial pivoting and implicit row scaling.

    L (unit diagonal) and U are packed into one array; `pivots[j]` is the row
    swapped into position j.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"LU needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    pivots = np.arange(n)
    sign = 1
    singular = False
    big = np.max(np.abs(a), axis=1) if n else np.zeros(0)
    scale = np.where(big > 0, 1.0 / np.where(big > 0, big, 1.0), 0.0)
    for j in range(n):
        col = np.abs(a[j:, j]) * scale[j:]
        imax = j + int(np.argmax(col))
        if imax != j:
            a[[j, imax]] = a[[imax, j]]
            scale[[j, imax]] = scale[[imax, j]]
            pivots[[j, imax]] = pivots[[imax, j]]
            sign = -sign
        if a[j, j] == 0:
            singular = True
            continue
        a[j + 1 :, j] /= a[j, j]
        a[j + 1 :, j + 1 :] -= np.outer(a[j + 1 :, j], a[j, j + 1 :])
    return LUFactors(a, pivots, sign, singular)


def lu_determinant(m: np.ndarray | GradedOperator) -> complex:
    entries = m.entries if isinstance(m, GradedOperator) else m
    if np.asarray(entries).shape == (0, 0):
        return 1.0 + 0.0j
    f = lu_decompose(entries)
    if f.singular:
        return 0.0 + 0.0j
    return complex(f.sign * np.prod(np.diag(f.lu)))


def lu_solve(m: np.ndarray | GradedOperator, rhs: np.ndarray) -> np.ndarray:
    """Solve M X = B for a vector or matrix right-hand side."""
    entries = m.entries if isinstance(m, GradedOperator) else m
    f = lu_decompose(entries)
    if f.singular:
        raise DomainError("singular matrix in linear solve")
    b = np.array(rhs, dtype=complex)[f.pivots]
    n = f.lu.shape[0]
    # forward substitution, unit lower
    for i in range(1, n):
        b[i] -= f.lu[i, :i] @ b[:i]
    for i in range(n - 1, -1, -1):
        b[i] = (b[i] - f.lu[i, i + 1 :] @ b[i + 1 :]) / f.lu[i, i]
    return b


@dataclass
class PolySamples:
    nodes: List[complex]
    values: List[complex] | List[GradedOperator]
    degree_bound: int

    def stacked(self) -> np.ndarray:
        if self.values and isinstance(self.values[0], GradedOperator):
            return np.stack([v.entries for v in self.values])  # type: ignore[union-attr]
        return np.asarray(self.values, dtype=complex)


def _leja_order(nodes: np.ndarray) -> np.ndarray:
    n = len(nodes)
    order = [int(np.argmax(np.abs(nodes)))]
    for _ in range(1, n):
        prod = np.ones(n)
        for k in order:
            prod *= np.abs(nodes - nodes[k])
        prod[order] = -1.0
        order.append(int(np.argmax(prod)))
    return np.asarray(order)


def interpolate(samples: PolySamples) -> np.ndarray:
    """
    Monomial coefficients (ascending powers) of the interpolating polynomial.

    Newton divided differences on Leja-ordered nodes; works elementwise for
    operator-valued samples, returning an array of shape (len(nodes), ...).
    """
    nodes = np.asarray(samples.nodes, dtype=complex)
    if len(nodes) < samples.degree_bound + 1:
        raise DomainError(
            f"{len(nodes)} nodes cannot fix a polynomial of degree {samples.degree_bound}"
        )
    for i in range(len(nodes)):
        for j in range(i):
            if abs(nodes[i] - nodes[j]) <= 1e-14 * max(1.0, abs(nodes[i])):
                raise DomainError(f"duplicate interpolation node {nodes[i]}")
    values = samples.stacked()
    order = _leja_order(nodes)
    x = nodes[order]
    c = np.array(values[order], dtype=complex)
    m = len(x)
    shape = (m,) + (1,) * (c.ndim - 1)
    for k in range(1, m):
        denom = (x[k:] - x[: m - k]).reshape((m - k,) + shape[1:])
        c[k:] = (c[k:] - c[k - 1 : m - 1]) / denom
    # Horner expansion of the Newton form into monomials
    coeffs = np.zeros_like(c)
    coeffs[0] = c[m - 1]
    for k in range(m - 2, -1, -1):
        shifted = np.zeros_like(coeffs)
        shifted[1:] = coeffs[:-1]
        coeffs = shifted - x[k] * coeffs
        coeffs[0] += c[k]
    return coeffs


def evaluate(coeffs: np.ndarray, u: complex) -> np.ndarray:
    out = np.zeros_like(coeffs[0])
    for c in coeffs[::-1]:
        out = out * u + c
    return out


def interpolation_residual(samples: PolySamples, coeffs: np.ndarray) -> float:
    values = samples.stacked()
    worst = 0.0
    for node, value in zip(samples.nodes, values):
        got = evaluate(coeffs, node)
        scale = max(float(np.linalg.norm(value)), 1e-300)
        worst = max(worst, float(np.linalg.norm(got - value)) / scale)
    return worst


def integer_nodes(
    count: int, avoid: Sequence[complex] = (), shift: float = DEFAULT_NODE_SHIFT
) -> Tuple[List[complex], float]:
    """Nodes k + shift, k = 0..count-1, with the shift moved off degenerate points."""
    avoid_arr = np.asarray(list(avoid), dtype=complex)
    for _ in range(1000):
        nodes = np.arange(count) + shift
        if avoid_arr.size == 0 or np.min(
            np.abs(nodes[:, None] - avoid_arr[None, :])
        ) > NODE_CLEARANCE:
            return [complex(n) for n in nodes], shift
        logger.debug(f"node shift {shift} hits a degenerate point, bumping")
        shift += 0.113
    raise DomainError("could not place interpolation nodes away from degenerate points")


def circle_nodes(count: int, radius: float = 1.0, offset: float = 0.1) -> List[complex]:
    angles = 2 * np.pi * (np.arange(count) + offset) / count
    return [complex(z) for z in radius * np.exp(1j * angles)]
