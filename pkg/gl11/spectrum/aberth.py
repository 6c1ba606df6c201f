import logging
from typing import List, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from gl11.errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

MAX_SWEEPS = 500
STEP_TOLERANCE = 1e-12
START_OFFSET = 0.4


def _start_points(coeffs: np.ndarray) -> np.ndarray:
    """Points on the Cauchy-bound circle with a fixed angular offset."""
    degree = len(coeffs) - 1
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1] / coeffs[-1])))
    angles = 2 * np.pi * (np.arange(degree) + START_OFFSET) / degree
    return radius * np.exp(1j * angles)


def trim(coeffs: Sequence[complex], tol: float = 0.0) -> np.ndarray:
    """Drop vanishing leading coefficients (ascending order)."""
    c = np.asarray(coeffs, dtype=complex)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    end = len(c)
    while end > 0 and abs(c[end - 1]) <= tol * scale:
        end -= 1
    return c[:end]


def aberth_roots(coeffs: Sequence[complex]) -> List[complex]:
    """
    All roots of the polynomial with ascending coefficients `coeffs`.

    Jacobi-style Aberth-Ehrlich sweeps; a root is frozen once its step is below
    STEP_TOLERANCE relative to its modulus.
    """
    c = trim(coeffs)
    if c.size == 0:
        raise DomainError("the zero polynomial has no isolated roots")
    degree = len(c) - 1
    if degree == 0:
        return []
    poly = Polynomial(c)
    deriv = poly.deriv()
    z = _start_points(c)
    done = np.zeros(degree, dtype=bool)
    for sweep in range(MAX_SWEEPS):
        values = poly(z)
        slopes = deriv(z)
        w = np.zeros(degree, dtype=complex)
        for k in range(degree):
            if done[k]:
                continue
            if values[k] == 0:
                done[k] = True
                continue
            newton = values[k] / slopes[k] if slopes[k] != 0 else values[k]
            others = np.delete(z, k)
            repulsion = np.sum(1.0 / (z[k] - others))
            w[k] = newton / (1 - newton * repulsion)
        z = z - w
        done |= np.abs(w) <= STEP_TOLERANCE * (1 + np.abs(z))
        if done.all():
            logger.debug(f"aberth: degree {degree} converged after {sweep + 1} sweeps")
            return [complex(r) for r in z]
    residuals = np.abs(poly(z))
    dump = ", ".join(f"{r:.6g}: {res:.3e}" for r, res in zip(z, residuals))
    raise ConvergenceError(
        f"Aberth iteration did not converge after {MAX_SWEEPS} sweeps (residuals {dump})"
    )
