from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from gl11.config import JobConfig
from gl11.errors import DomainError
from gl11.model.types import ModelParameters, random_theta
from gl11.report import VerificationReport
from gl11.utils import dataclass_to_clean_dict


@dataclass
class JobResult:
    report: VerificationReport
    table: Optional[pd.DataFrame] = None

    def checks_table(self) -> pd.DataFrame:
        rows = [dataclass_to_clean_dict(c) for c in self.report.checks]
        columns = ["family", "name", "residual", "tolerance", "passed", "note", "fitted_scalar", "point"]
        return pd.DataFrame(rows, columns=columns)


class BaseJob(ABC):
    NAME: str = "base_job"

    def __init__(self, config: JobConfig) -> None:
        self.config = config
        self.rng = np.random.default_rng(config.seed)

    def generic_parameters(self) -> ModelParameters:
        """The configured model, with seeded generic inhomogeneities if none were given."""
        p = self.config.model
        if not p.is_homogeneous():
            return p
        for _ in range(100):
            q = p.with_theta(random_theta(p.n, self.rng))
            try:
                if q.is_open:
                    q.check_open_generic()
                else:
                    q.check_generic()
            except DomainError:
                continue
            return q
        raise DomainError("could not draw generic inhomogeneities")

    @abstractmethod
    def run(self) -> JobResult:
        pass
