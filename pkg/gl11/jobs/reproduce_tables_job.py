import os

from gl11.jobs.base_job import BaseJob, JobResult
from gl11.tables import reproduce_tables


class ReproduceTablesJob(BaseJob):
    NAME = "reproduce-tables"

    def run(self) -> JobResult:
        out = self.config.out
        out_dir = os.path.dirname(os.path.abspath(out)) if out else "."
        report = reproduce_tables(out_dir, self.config.tolerances)
        report.seed = self.config.seed
        return JobResult(report)
