import logging

from gl11.fusion.checks import verify_fusion
from gl11.jobs.base_job import BaseJob, JobResult
from gl11.report import new_report

logger = logging.getLogger(__name__)


class VerifyFusionJob(BaseJob):
    NAME = "verify-fusion"

    def run(self) -> JobResult:
        p = self.config.model
        if not p.is_open:
            logger.info("periodic boundary: fused K-matrix checks are skipped")
        report = new_report(self.NAME, p, self.config.seed)
        report.extend(verify_fusion(p, self.rng, self.config.tolerances.identity))
        return JobResult(report.sort())
