"""CSV tables and JSON-lines reports.

Every CSV starts with a `# schema=<name>/v<version>` comment line, then an
optional `# generated=<timestamp>` line, then the header. Floats are written
with 17 significant digits so they read back to the same double.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from typing import Any, TextIO

from expfrac.domain import InequalityReport
from expfrac.services import LimitSweep, SweepRow

SWEEP_SCHEMA = "sweep/v1"
SWEEP_COLUMNS = (
    "inequality", "seed", "family", "alpha", "A", "a", "b",
    "term0", "term1", "term2", "slack0", "slack1",
    "margin", "verdict", "panels_used", "coef_branch", "error",
)

CONSTANTS_SCHEMA = "constants/v1"
CONSTANTS_COLUMNS = (
    "A", "alpha", "midpoint_norm", "dragomir_norm", "p2_norm",
    "p1_second_norm", "p1_first_norm", "p2_second_norm", "branch",
)

LIMITS_SCHEMA = "limits/v1"
LIMITS_COLUMNS = ("alpha", "value", "classical", "abs_error")

SELFTEST_SCHEMA = "selftest/v1"
SELFTEST_COLUMNS = ("check", "status", "detail")


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".16e")
    return str(value)


def write_csv(
    stream: TextIO,
    schema: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    *,
    timestamp: str | None = None,
) -> int:
    """Write one table; returns the number of data rows."""
    stream.write(f"# schema={schema}\n")
    if timestamp is not None:
        stream.write(f"# generated={timestamp}\n")
    writer = csv.writer(stream, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(columns)
    count = 0
    for row in rows:
        writer.writerow([format_value(v) for v in row])
        count += 1
    return count


def _padded(values: Sequence[float], width: int) -> list[float | None]:
    return [*values, *([None] * (width - len(values)))]


def sweep_rows(rows: Iterable[SweepRow]) -> Iterable[list[Any]]:
    for row in rows:
        task, report = row.task, row.report
        head = [
            str(task.inequality), task.seed, task.family, task.alpha.alpha,
            None, task.iv.a, task.iv.b,
        ]
        if report is None:
            yield [*head, *([None] * 6), str(row.verdict), None, None, row.error]
            continue
        head[4] = report.A
        yield [
            *head,
            *_padded(report.values, 3),
            *_padded(report.slacks, 2),
            report.margin,
            str(report.verdict),
            report.panels_used,
            None if report.coef_branch is None else str(report.coef_branch),
            row.error,
        ]


def limit_rows(sweep: LimitSweep) -> Iterable[list[Any]]:
    for row in sweep.rows:
        yield [row.alpha, row.value, row.classical, row.abs_error]


def write_reports(stream: TextIO, reports: Iterable[InequalityReport]) -> int:
    """One InequalityReport JSON document per line."""
    count = 0
    for report in reports:
        stream.write(report.model_dump_json())
        stream.write("\n")
        count += 1
    return count
