import logging

from gl11.fusion.checks import verify_rk
from gl11.jobs.base_job import BaseJob, JobResult
from gl11.report import new_report

logger = logging.getLogger(__name__)


class VerifyRkJob(BaseJob):
    NAME = "verify-rk"

    def run(self) -> JobResult:
        p = self.config.model
        logger.info(f"checking R- and K-matrix identities (eta={p.eta}, {p.boundary.value})")
        report = new_report(self.NAME, p, self.config.seed)
        report.extend(verify_rk(p, self.rng, self.config.tolerances.identity))
        return JobResult(report.sort())
