import logging

from gl11.jobs.base_job import BaseJob, JobResult
from gl11.spectrum.certify import certify_spectrum, spectrum_lines
from gl11.tables import spectrum_table

logger = logging.getLogger(__name__)


class SpectrumJob(BaseJob):
    NAME = "spectrum"

    def run(self) -> JobResult:
        p = self.config.model
        tol = self.config.tolerances
        if not p.is_homogeneous():
            logger.warning("inhomogeneous chain: energies are left empty")
        report = certify_spectrum(
            p,
            self.rng,
            seed=self.config.seed,
            membership_tolerance=tol.membership,
            spectral_tolerance=tol.spectral,
        )
        return JobResult(report, spectrum_table(p, spectrum_lines(p)))
