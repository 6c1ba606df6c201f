import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from gl11.config import PRESETS, Tolerances
from gl11.logger import getLogger, setLevel
from gl11.model.types import ModelParameters
from gl11.report import CheckResult, VerificationReport
from gl11.spectrum.certify import spectrum_lines
from gl11.spectrum.tq import SpectralLine
from gl11.utils import atomic_write_text, format_complex, save_to_json

logger = getLogger(__name__)

SQRT3 = np.sqrt(3.0)
INF = "inf"

# (roots, energy); periodic roots may include INF
GoldenRow = Tuple[Tuple[complex | str, ...], float]

_M1, _M2 = (3 + 1j * SQRT3) / 6, (3 - 1j * SQRT3) / 6
GOLDEN_TABLE1: List[GoldenRow] = [
    ((), -3.0),
    ((INF,), -3.0),
    ((_M1,), 0.0),
    ((_M2,), 0.0),
    ((INF, _M1), 0.0),
    ((INF, _M2), 0.0),
    ((_M1, _M2), 3.0),
    ((INF, _M1, _M2), 3.0),
]

_A, _B, _C = (1 + 1j) / 2, (1 - 1j) / 2, 0.5 + 0j
GOLDEN_TABLE2: List[GoldenRow] = [
    ((), -4.0),
    ((INF,), -4.0),
    ((_A,), -2.0),
    ((_B,), -2.0),
    ((INF, _A), -2.0),
    ((INF, _B), -2.0),
    ((_C,), 0.0),
    ((_A, _B), 0.0),
    ((INF, _C), 0.0),
    ((INF, _A, _B), 0.0),
    ((_A, _C), 2.0),
    ((_B, _C), 2.0),
    ((INF, _A, _C), 2.0),
    ((INF, _B, _C), 2.0),
    ((_A, _B, _C), 4.0),
    ((INF, _A, _B, _C), 4.0),
]

_L1, _L2, _L3 = -0.5 - 1.5235j, -0.5 - 0.2187j, -0.5 - 0.5565j
GOLDEN_TABLE3: List[GoldenRow] = [
    ((), 2.7667),
    ((_L1,), 2.3777),
    ((_L2,), -0.5911),
    ((_L3,), 0.9800),
    ((_L1, _L2), -0.9800),
    ((_L1, _L3), 0.5911),
    ((_L2, _L3), -2.3777),
    ((_L1, _L2, _L3), -2.7667),
]


@dataclass(frozen=True)
class ReferenceTable:
    name: str
    preset: str
    golden: List[GoldenRow]
    exact: bool


TABLES = (
    ReferenceTable("table1", "table1", GOLDEN_TABLE1, exact=True),
    ReferenceTable("table2", "table2", GOLDEN_TABLE2, exact=True),
    ReferenceTable("table3", "table3", GOLDEN_TABLE3, exact=False),
)

EXACT_TOLERANCE = 1e-9


def spectrum_table(p: ModelParameters, lines: Sequence[SpectralLine]) -> pd.DataFrame:
    """One row per Bethe state: root columns (infinite root first), then E."""
    prefix = "lambda" if p.is_open else "mu"
    columns = [f"{prefix}_{k + 1}" for k in range(p.n)]
    rows = []
    for line in lines:
        roots = ([INF] if line.roots.has_infinite_root else []) + [
            format_complex(r) for r in line.roots.finite_roots
        ]
        row: Dict[str, str] = {c: "" for c in columns}
        for column, value in zip(columns, roots):
            row[column] = value
        row["E"] = format_complex(line.energy) if line.energy is not None else ""
        rows.append(row)
    return pd.DataFrame(rows, columns=columns + ["E"])


def _matches(golden: Tuple[complex | str, ...], line: SpectralLine, tol: float) -> bool:
    has_inf = INF in golden
    finite = [r for r in golden if not isinstance(r, str)]
    if has_inf != line.roots.has_infinite_root or len(finite) != len(line.roots.finite_roots):
        return False
    remaining = list(line.roots.finite_roots)
    for r in finite:
        distances = [abs(r - s) for s in remaining]
        if not distances or min(distances) > tol:
            return False
        remaining.pop(int(np.argmin(distances)))
    return True


def _label(golden: Tuple[complex | str, ...]) -> str:
    return "{" + ", ".join(r if isinstance(r, str) else format_complex(r) for r in golden) + "}"


def compare_table(
    name: str, golden: List[GoldenRow], lines: Sequence[SpectralLine], tol: float
) -> List[CheckResult]:
    """Rows are matched by root set, not by position."""
    checks = []
    unused = list(lines)
    for k, (roots, expected) in enumerate(golden):
        found = next((line for line in unused if _matches(roots, line, tol)), None)
        if found is None or found.energy is None:
            checks.append(
                CheckResult.judge(
                    f"row-{k + 1}", name, float("inf"), tol,
                    note=f"no state with roots {_label(roots)} (expected E = {expected})",
                )
            )
            continue
        unused.remove(found)
        got = found.energy
        residual = max(abs(got.real - expected), abs(got.imag))
        checks.append(
            CheckResult.judge(
                f"row-{k + 1}", name, residual, tol,
                note=f"roots {_label(roots)}: E expected {expected}, got {format_complex(got)}",
            )
        )
    if unused:
        checks.append(
            CheckResult.judge("extra-rows", name, float(len(unused)), 0.0, note=f"{len(unused)} states without a golden row")
        )
    return checks


def reproduce_table(reference: ReferenceTable, tolerances: Tolerances) -> Tuple[pd.DataFrame, List[CheckResult]]:
    p = PRESETS[reference.preset].model
    lines = spectrum_lines(p)
    tol = EXACT_TOLERANCE if reference.exact else tolerances.table
    return spectrum_table(p, lines), compare_table(reference.name, reference.golden, lines, tol)


def reproduce_tables(out_dir: Optional[str], tolerances: Tolerances = Tolerances()) -> VerificationReport:
    """Regenerate the three spectrum tables; CSVs go to `out_dir` when given."""
    report = VerificationReport(job="reproduce-tables")
    for reference in TABLES:
        table, checks = reproduce_table(reference, tolerances)
        report.extend(checks)
        failed = [c for c in checks if not c.passed]
        for c in failed:
            logger.error(f"{reference.name} {c.name}: {c.note}")
        if out_dir:
            path = os.path.join(out_dir, f"{reference.name}.csv")
            atomic_write_text(path, table.to_csv(index=False))
            logger.info(f"{reference.name} saved to {path}")
    return report.sort()


def main(out_dir: str, verbose: bool = False) -> int:
    setLevel(logging.DEBUG if verbose else logging.INFO)
    report = reproduce_tables(out_dir)
    path = os.path.join(out_dir, "comparison.json")
    save_to_json(path, report)
    logger.info(f"{report.summary()}; comparison saved to {path}")
    return 0 if report.passed else 1


def parse_arguments() -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Regenerate the spectrum tables and compare them with the reference values."
    )

    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Enable verbose logging",
        default=False,
    )

    parser.add_argument(
        "--out-dir",
        type=str,
        default="tables",
        help="Directory for table1.csv, table2.csv, table3.csv and comparison.json (default: tables)",
    )

    return parser.parse_args()


if __name__ == "__main__":
    args = parse_arguments()
    sys.exit(main(args.out_dir, args.verbose))
