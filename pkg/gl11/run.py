import argparse
import logging
import os
import sys
import time
from typing import Dict, List, Optional

from gl11.config import PRESETS, JobConfig, OutputFormat, load_config, with_overrides
from gl11.errors import ConfigError, ConvergenceError, DomainError, StructureError
from gl11.jobs.base_job import BaseJob, JobResult
from gl11.jobs.reproduce_tables_job import ReproduceTablesJob
from gl11.jobs.spectrum_job import SpectrumJob
from gl11.jobs.verify_fusion_job import VerifyFusionJob
from gl11.jobs.verify_identities_job import VerifyIdentitiesJob
from gl11.jobs.verify_rk_job import VerifyRkJob
from gl11.logger import getLogger, setLevel
from gl11.model.types import Boundary, ModelParameters
from gl11.utils import atomic_write_text, parse_complex, save_to_json

JOBS: Dict[str, type[BaseJob]] = {
    "verify-rk": VerifyRkJob,
    "verify-fusion": VerifyFusionJob,
    "verify-identities": VerifyIdentitiesJob,
    "spectrum": SpectrumJob,
    "reproduce-tables": ReproduceTablesJob,
}

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

logger = getLogger(__name__)


def write_outputs(result: JobResult, config: JobConfig) -> List[str]:
    """The report (JSON) and the table (CSV); `out` names the file of the chosen format."""
    out = config.out or f"{config.job}.{config.format.value}"
    base, _ = os.path.splitext(out)
    written = []
    if config.format == OutputFormat.JSON:
        save_to_json(out, result.report)
        written.append(out)
        if result.table is not None:
            atomic_write_text(base + ".csv", result.table.to_csv(index=False))
            written.append(base + ".csv")
    else:
        table = result.table if result.table is not None else result.checks_table()
        atomic_write_text(out, table.to_csv(index=False))
        save_to_json(base + ".json", result.report)
        written += [out, base + ".json"]
    return written


def run(config: JobConfig) -> int:
    """Run one job; 0 when every check passed, 1 otherwise."""
    if config.job not in JOBS:
        raise ValueError(f"Unknown job: {config.job}")
    job = JOBS[config.job](config)
    logger.info(f"running {job.NAME} (N={config.model.n}, seed={config.seed})")
    started = time.perf_counter()
    result = job.run()
    elapsed = time.perf_counter() - started
    if config.record_time:
        result.report.wall_time = elapsed
    for failure in result.report.failures():
        logger.error(f"{failure.family} {failure.name}: residual {failure.residual:.3e} > {failure.tolerance:.1e}")
    for path in write_outputs(result, config):
        logger.info(f"saved {path}")
    logger.info(f"{result.report.summary()} in {elapsed:.2f}s")
    return EXIT_OK if result.report.passed else EXIT_FAILED


def main(
    job: str,
    config_path: Optional[str] = None,
    preset: Optional[str] = None,
    n: Optional[int] = None,
    eta: Optional[str] = None,
    boundary: Optional[str] = None,
    seed: Optional[int] = None,
    out: Optional[str] = None,
    output_format: Optional[str] = None,
    record_time: bool = False,
    verbose: bool = False,
) -> int:
    setLevel(logging.DEBUG if verbose else logging.INFO)

    try:
        if config_path and preset:
            raise ConfigError("--config and --preset cannot be combined", key="preset")
        if config_path:
            logger.debug(f"reading configuration from {config_path}")
            config = load_config(config_path)
        elif preset:
            if preset not in PRESETS:
                raise ConfigError(f"Unknown preset: {preset}", key="preset")
            config = PRESETS[preset]
        else:
            config = JobConfig(job=job, model=ModelParameters(n=n or 3))
        config = with_overrides(
            config,
            job=job,
            n=n,
            eta=parse_complex(eta) if eta is not None else None,
            boundary=Boundary(boundary) if boundary else None,
            seed=seed,
            out=out,
            output_format=OutputFormat(output_format) if output_format else None,
            record_time=record_time,
        )
    except (ConfigError, ValueError) as e:
        logger.error(f"configuration error: {e}")
        return EXIT_CONFIG
    except OSError as e:
        logger.error(f"cannot read configuration: {e}")
        return EXIT_CONFIG

    try:
        return run(config)
    except DomainError as e:
        logger.error(f"invalid input: {e}")
        return EXIT_CONFIG
    except (StructureError, ConvergenceError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILED


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Verify the identities of the graded chain and certify its Bethe ansatz spectrum."
    )

    parser.add_argument(
        "job",
        type=str,
        choices=list(JOBS.keys()),
        help="Job to run.",
    )

    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Enable verbose logging",
        default=False,
    )

    parser.add_argument("--config", type=str, help="INI file with [model], [job] and [tolerances] sections.")
    parser.add_argument("--preset", type=str, choices=list(PRESETS.keys()), help="Built-in parameter preset.")
    parser.add_argument("--n", type=int, help="Number of sites.")
    parser.add_argument("--eta", type=str, help="Crossing parameter, e.g. 1 or 0.8+0.1i.")
    parser.add_argument("--boundary", type=str, choices=[b.value for b in Boundary], help="Boundary condition.")
    parser.add_argument("--seed", type=int, help="Seed for every random draw (recorded in the report).")
    parser.add_argument("--out", type=str, help="Output file (default: <job>.<format>).")
    parser.add_argument(
        "--format",
        type=str,
        choices=[f.value for f in OutputFormat],
        help="Output format (default: json).",
    )

    parser.add_argument(
        "--record-time",
        action="store_true",
        default=False,
        help="Write the wall time into the report (reports are otherwise byte-identical per seed).",
    )

    return parser.parse_args(argv)


if __name__ == "__main__":
    args = parse_arguments()
    sys.exit(
        main(
            args.job,
            args.config,
            args.preset,
            args.n,
            args.eta,
            args.boundary,
            args.seed,
            args.out,
            args.format,
            args.record_time,
            args.verbose,
        )
    )
