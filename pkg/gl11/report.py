import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from gl11.model.types import ModelParameters
from gl11.utils import dataclass_to_clean_dict

SCHEMA_VERSION = 1


@dataclass
class CheckResult:
    name: str
    family: str
    residual: float
    tolerance: float
    passed: bool
    note: Optional[str] = None
    fitted_scalar: Optional[complex] = None
    point: Optional[complex] = None

    @classmethod
    def judge(
        cls,
        name: str,
        family: str,
        residual: float,
        tolerance: float,
        note: Optional[str] = None,
        fitted_scalar: Optional[complex] = None,
        point: Optional[complex] = None,
    ) -> "CheckResult":
        residual = float(residual)
        passed = math.isfinite(residual) and residual <= tolerance
        return cls(name, family, residual, tolerance, passed, note, fitted_scalar, point)


def parameters_to_dict(p: ModelParameters) -> Dict[str, Any]:
    return dataclass_to_clean_dict(p)  # type: ignore[no-any-return]


@dataclass
class VerificationReport:
    job: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    seed: Optional[int] = None
    node_shift: Optional[float] = None
    wall_time: Optional[float] = None
    schema: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def extend(self, checks: List[CheckResult]) -> "VerificationReport":
        self.checks.extend(checks)
        return self

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        if self.node_shift is None:
            self.node_shift = other.node_shift
        return self

    def sort(self) -> "VerificationReport":
        self.checks.sort(key=lambda c: (c.family, c.name))
        return self

    def summary(self) -> str:
        failed = len(self.failures())
        return f"{len(self.checks) - failed}/{len(self.checks)} checks passed"


def new_report(job: str, p: ModelParameters, seed: Optional[int] = None) -> VerificationReport:
    return VerificationReport(job=job, parameters=parameters_to_dict(p), seed=seed)
