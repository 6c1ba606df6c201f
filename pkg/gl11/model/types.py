from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from gl11.algebra.graded import FUNDAMENTAL, GradedOperator, GradedSpace
from gl11.errors import DomainError

GENERIC_CLEARANCE = 1e-6


class Boundary(Enum):
    PERIODIC = "periodic"
    OPEN = "open"


@dataclass(frozen=True)
class ModelParameters:
    n: int
    eta: complex = 1.0
    theta: Tuple[complex, ...] = ()
    a_minus: complex = 1.2
    a_plus: complex = 0.5
    b_minus: complex = 1.0
    b_plus: complex = 1.0
    f_minus: complex = 1.0
    f_plus: complex = 1.0
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"site count must be positive, got {self.n}")
        theta = tuple(complex(t) for t in self.theta) or (0j,) * self.n
        if len(theta) != self.n:
            raise DomainError(
                f"expected {self.n} inhomogeneities, got {len(theta)}"
            )
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "eta", complex(self.eta))
        for name in ("a_minus", "a_plus", "b_minus", "b_plus", "f_minus", "f_plus"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.eta == 0:
            raise DomainError("crossing parameter must be nonzero")

    @property
    def is_open(self) -> bool:
        return self.boundary == Boundary.OPEN

    def is_homogeneous(self, tol: float = 0.0) -> bool:
        return all(abs(t) <= tol for t in self.theta)

    def homogeneous(self) -> "ModelParameters":
        return replace(self, theta=(0j,) * self.n)

    def with_theta(self, theta: Sequence[complex]) -> "ModelParameters":
        return replace(self, theta=tuple(complex(t) for t in theta))

    def with_grassmann(
        self, b_minus: complex, b_plus: complex, f_minus: complex, f_plus: complex
    ) -> "ModelParameters":
        return replace(
            self, b_minus=b_minus, b_plus=b_plus, f_minus=f_minus, f_plus=f_plus
        )

    def body_only(self) -> "ModelParameters":
        return self.with_grassmann(0, 0, 0, 0)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return (
            abs(self.a_minus.imag) <= tol
            and abs(self.a_plus.imag) <= tol
            and abs(self.b_minus - self.f_minus.conjugate()) <= tol
            and abs(self.b_plus - self.f_plus.conjugate()) <= tol
        )

    def check_generic(self) -> None:
        eta = self.eta
        bad = (0, eta, 2 * eta, -eta, -2 * eta)
        for i in range(self.n):
            for j in range(i):
                ti, tj = self.theta[i], self.theta[j]
                for d in (ti - tj, ti + tj):
                    if any(abs(d - b) <= GENERIC_CLEARANCE for b in bad):
                        raise DomainError(
                            f"theta_{j + 1}={tj} and theta_{i + 1}={ti} are not in generic position"
                        )

    def check_open_generic(self) -> None:
        self.check_generic()
        eta = self.eta
        bad = [0, eta / 2, -eta / 2, eta, -eta, 1.5 * eta, -1.5 * eta]
        for j, t in enumerate(self.theta):
            if any(abs(t - b) <= GENERIC_CLEARANCE for b in bad):
                raise DomainError(
                    f"theta_{j + 1}={t} hits a zero of the open normalization factors"
                )


def random_theta(
    n: int, rng: np.random.Generator, scale: float = 0.5
) -> Tuple[complex, ...]:
    """Draw generic complex inhomogeneities."""
    return tuple(
        complex(x, y) for x, y in scale * rng.uniform(-1.0, 1.0, size=(n, 2))
    )


def random_parameters(
    n: int,
    rng: np.random.Generator,
    boundary: Boundary = Boundary.PERIODIC,
    eta: Optional[complex] = None,
) -> ModelParameters:
    def c() -> complex:
        x, y = rng.uniform(-1.0, 1.0, size=2)
        return complex(x, y)

    for _ in range(100):
        p = ModelParameters(
            n=n,
            eta=eta if eta is not None else complex(rng.uniform(0.5, 1.5), rng.uniform(-0.3, 0.3)),
            theta=random_theta(n, rng),
            a_minus=c(),
            a_plus=c(),
            b_minus=c(),
            b_plus=c(),
            f_minus=c(),
            f_plus=c(),
            boundary=boundary,
        )
        try:
            if p.is_open:
                p.check_open_generic()
            else:
                p.check_generic()
        except DomainError:
            continue
        return p
    raise DomainError("could not draw generic parameters")


def hermitian_preset(
    n: int, eta: float = 1.0, a_minus: float = 1.2, a_plus: float = 0.5, b_minus: complex = 1.0, b_plus: complex = 1.0
) -> ModelParameters:
    return ModelParameters(
        n=n,
        eta=eta,
        a_minus=a_minus,
        a_plus=a_plus,
        b_minus=b_minus,
        b_plus=b_plus,
        f_minus=complex(b_minus).conjugate(),
        f_plus=complex(b_plus).conjugate(),
        boundary=Boundary.OPEN,
    )


@dataclass(frozen=True)
class GrassmannContext:
    """CG_1 realized on one auxiliary graded site; E maps the even vector to the odd one."""

    aux_space: GradedSpace = field(default_factory=lambda: GradedSpace.of(FUNDAMENTAL))
    adjoint_factor: complex = -1j

    @property
    def generator(self) -> GradedOperator:
        e = np.zeros((2, 2), dtype=complex)
        e[1, 0] = 1.0
        return GradedOperator.on(self.aux_space, e)

    @property
    def adjoint(self) -> GradedOperator:
        return self.adjoint_factor * self.generator


GRASSMANN = GrassmannContext()
