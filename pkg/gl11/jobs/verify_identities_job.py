import logging
from typing import Callable, Dict, List

import numpy as np

from gl11.jobs.base_job import BaseJob, JobResult
from gl11.report import CheckResult, VerificationReport, new_report
from gl11.transfer.hamiltonian import check_hamiltonian
from gl11.transfer.identities import (
    transfer_battery,
    verify_operator_identities,
    verify_projection_identities,
)
from gl11.utils import fan_out

logger = logging.getLogger(__name__)


class VerifyIdentitiesJob(BaseJob):
    """Monodromy and transfer-matrix identities at seeded generic inhomogeneities."""

    NAME = "verify-identities"

    def run(self) -> JobResult:
        p = self.generic_parameters()
        tol = self.config.tolerances
        # one child generator per family keeps results independent of scheduling
        seeds = self.rng.integers(0, 2**63, size=3)
        logger.info(f"verifying transfer identities for N={p.n} ({p.boundary.value})")

        def battery() -> VerificationReport:
            checks, shift = transfer_battery(p, np.random.default_rng(seeds[2]), tol.identity)
            report = VerificationReport(job=self.NAME, checks=checks, node_shift=shift)
            return report

        def hamiltonian() -> VerificationReport:
            checks: List[CheckResult] = []
            if p.n >= 2:
                checks.append(check_hamiltonian(p, tol.hamiltonian))
            return VerificationReport(job=self.NAME, checks=checks)

        tasks: Dict[str, Callable[[], VerificationReport]] = {
            "projection": lambda: verify_projection_identities(
                p, np.random.default_rng(seeds[0]), tol.identity
            ),
            "operator": lambda: verify_operator_identities(
                p, np.random.default_rng(seeds[1]), tol.identity
            ),
            "battery": battery,
            "hamiltonian": hamiltonian,
        }
        results = fan_out(tasks, desc="Verifying identity families")
        report = new_report(self.NAME, p, self.config.seed)
        for name in sorted(results):
            report.merge(results[name])
        return JobResult(report.sort())
