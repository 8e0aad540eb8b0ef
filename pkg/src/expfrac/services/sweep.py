"""Corpus sweeps: many independent checks, collected in a deterministic order."""

from __future__ import annotations

import concurrent.futures
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

import structlog

from expfrac.config import get_settings
from expfrac.domain import (
    CONVEX_FAMILIES,
    SMOOTH_FAMILIES,
    CorpusEntry,
    ExpfracError,
    Family,
    FracOrder,
    FunctionSpec,
    InequalityName,
    InequalityReport,
    Interval,
    NonConvergent,
    Shape,
    ShapeUnknown,
    Verdict,
    WeightSpec,
    make_weight,
    random_convex,
)
from expfrac.domain.corpus import concave_corpus, convex_corpus

from .inequalities import run_check
from .integrators import QuadratureConfig

logger = structlog.get_logger()

PAIRED = (InequalityName.PACHPATTE1, InequalityName.PACHPATTE2)

# Chains whose direction depends on the sweep shape
SHAPED = (InequalityName.HH, InequalityName.FEJER)


@dataclass(frozen=True, slots=True)
class SweepTask:
    # Position in the plan; rows are emitted in this order
    index: int
    inequality: InequalityName
    seed: int
    family: str
    u: FunctionSpec
    alpha: FracOrder
    iv: Interval
    partner: FunctionSpec | None = None
    weight: WeightSpec | None = None
    expect_shape: Shape | None = None


@dataclass(frozen=True, slots=True)
class SweepRow:
    task: SweepTask
    verdict: Verdict
    report: InequalityReport | None = None
    error: str = ""


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]

    @property
    def counts(self) -> Counter[Verdict]:
        return Counter(row.verdict for row in self.rows)

    @property
    def exit_code(self) -> int:
        return sweep_exit_code(self.rows)

    def summary(self) -> str:
        counts = self.counts
        return " ".join(f"{v}={counts.get(v, 0)}" for v in Verdict) + f" total={len(self.rows)}"


def _entries(
    inequality: InequalityName,
    iv: Interval,
    seed: int,
    size: int,
    shape: Shape,
    functions: Sequence[FunctionSpec] | None,
) -> list[CorpusEntry]:
    if functions is not None:
        return [
            CorpusEntry(seed + i, Family(f.family_name), f)
            for i, f in enumerate(functions)
        ]
    if inequality is InequalityName.DA:
        return convex_corpus(seed, size, iv, SMOOTH_FAMILIES)
    if inequality in PAIRED:
        return convex_corpus(seed, size, iv, nonneg=True)
    if shape is Shape.CONCAVE:
        return concave_corpus(seed, size, iv)
    return convex_corpus(seed, size, iv)


def _partner(
    i: int,
    entries: Sequence[CorpusEntry],
    iv: Interval,
    seed: int,
    size: int,
    explicit: bool,
) -> FunctionSpec:
    if explicit:
        return entries[(i + 1) % len(entries)].function
    family = CONVEX_FAMILIES[(i + 1) % len(CONVEX_FAMILIES)]
    return random_convex(seed + size + i, family, iv, nonneg=True)


def build_tasks(
    inequalities: Sequence[InequalityName | str],
    intervals: Sequence[Interval],
    alphas: Sequence[float],
    *,
    seed: int = 0,
    size: int = 0,
    shape: Shape = Shape.CONVEX,
    expect_shape: Shape | None = None,
    functions: Sequence[FunctionSpec] | None = None,
) -> list[SweepTask]:
    """Expand a sweep plan into tasks: inequality × interval × function × alpha.

    With an explicit function list the corpus is replaced by it; Pachpatte
    pairs then take the next listed function as partner. HH and Fejér tasks
    expect the sweep shape unless expect_shape overrides it, so a function of
    the other shape becomes a screen_failed row.
    """
    orders = [FracOrder(a) for a in alphas]
    tasks: list[SweepTask] = []
    for raw in inequalities:
        inequality = InequalityName(raw)
        expected = expect_shape
        if expected is None and inequality in SHAPED:
            expected = shape
        for iv in intervals:
            entries = _entries(inequality, iv, seed, size, shape, functions)
            for i, entry in enumerate(entries):
                partner = None
                weight = None
                if inequality in PAIRED:
                    partner = _partner(i, entries, iv, seed, size, functions is not None)
                elif inequality is InequalityName.FEJER:
                    weight = make_weight(entry.seed, iv)
                for order in orders:
                    tasks.append(
                        SweepTask(
                            index=len(tasks),
                            inequality=inequality,
                            seed=entry.seed,
                            family=str(entry.family),
                            u=entry.function,
                            alpha=order,
                            iv=iv,
                            partner=partner,
                            weight=weight,
                            expect_shape=expected,
                        )
                    )
    return tasks


def run_task(task: SweepTask, cfg: QuadratureConfig | None = None) -> SweepRow:
    """One check; precondition failures become screen_failed rows."""
    try:
        if task.expect_shape is not None and task.u.shape is not task.expect_shape:
            raise ShapeUnknown(
                f"expected a {task.expect_shape} function, {task.family} is {task.u.shape}"
            )
        report = run_check(
            task.inequality, task.u, task.alpha, task.iv, cfg,
            partner=task.partner, weight=task.weight,
        )
    except NonConvergent as e:
        logger.warning("sweep_row_inconclusive", index=task.index, error=str(e))
        return SweepRow(task, Verdict.INCONCLUSIVE, error=f"{type(e).__name__}: {e}")
    except ExpfracError as e:
        logger.info("sweep_row_screened", index=task.index, error=str(e))
        return SweepRow(task, Verdict.SCREEN_FAILED, error=f"{type(e).__name__}: {e}")
    return SweepRow(task, report.verdict, report)


def run_sweep(
    tasks: Sequence[SweepTask],
    cfg: QuadratureConfig | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Run every task; rows come back in task order regardless of completion order."""
    cfg = cfg or QuadratureConfig.from_settings()
    workers = workers or get_settings().workers
    logger.info("sweep_started", tasks=len(tasks), workers=workers)
    if workers <= 1:
        rows = [run_task(task, cfg) for task in tasks]
    else:
        rows = []
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_task, task, cfg) for task in tasks]
            for future in concurrent.futures.as_completed(futures):
                rows.append(future.result())
        rows.sort(key=lambda row: row.task.index)
    result = SweepResult(rows)
    logger.info("sweep_finished", summary=result.summary())
    return result


def sweep_exit_code(rows: Sequence[SweepRow]) -> int:
    """2 on any violation, else 1 on any screen failure, else 3 on any inconclusive row."""
    verdicts = {row.verdict for row in rows if row.report is None or row.report.asserted}
    if Verdict.VIOLATED in verdicts:
        return 2
    if Verdict.SCREEN_FAILED in verdicts:
        return 1
    if Verdict.INCONCLUSIVE in verdicts:
        return 3
    return 0
