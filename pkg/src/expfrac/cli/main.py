"""expfrac CLI main entry point.

Exit codes: 0 holds/ok, 1 usage or domain error, 2 violation or failed
selftest, 3 inconclusive.
"""

import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn, TextIO

import click
import pendulum
import structlog

from expfrac.config import get_settings, override_settings
from expfrac.domain import (
    ConfigError,
    ExpfracError,
    FracOrder,
    FunctionSpec,
    InequalityName,
    IntegrationError,
    Interval,
    Verdict,
)
from expfrac.metrics import write_metrics
from expfrac.services import (
    build_tasks,
    classical_limit_sweep,
    constants_table,
    identity_limit,
    run_check,
    run_sweep,
)
from expfrac.services.integrators import QuadratureConfig

from . import writers
from .run_config import (
    DEFAULT_ALPHAS,
    Command,
    RunConfig,
    load_run_config,
    parse_grid,
    parse_overrides,
)
from .selftest import Status, run_selftest, selftest_exit_code

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATED = 2
EXIT_INCONCLUSIVE = 3

DEFAULT_A_GRID = "log:1e-8:1e2:21"
CLASSICAL_LIMIT_ALPHAS = (0.9, 0.99, 0.999)
IDENTITY_LIMIT_ALPHAS = (0.2, 0.1, 0.05, 0.02)

logger = structlog.get_logger()


def configure_logging(level: str, fmt: str) -> None:
    """Structured logs on stderr so report payloads on stdout stay parseable."""
    renderer = (
        structlog.processors.JSONRenderer()
        if fmt == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelNamesMapping()[level]
        ),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


class ExpfracCommand(click.Command):
    """Command whose usage errors exit 1 instead of click's 2."""

    def make_context(self, info_name, args, parent=None, **extra):  # type: ignore[override]
        try:
            return super().make_context(info_name, args, parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise


class ExpfracGroup(click.Group):
    command_class = ExpfracCommand

    def make_context(self, info_name, args, parent=None, **extra):  # type: ignore[override]
        try:
            return super().make_context(info_name, args, parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def resolve_command(self, ctx, args):  # type: ignore[override]
        try:
            return super().resolve_command(ctx, args)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by every command."""
    decorators = [
        click.option(
            "--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
            help="key = value run configuration file",
        ),
        click.option(
            "--set", "sets", multiple=True, metavar="KEY=VALUE",
            help="Override one configuration key (repeatable)",
        ),
        click.option(
            "--out", type=click.Path(dir_okay=False, path_type=Path),
            help="Write the payload here instead of stdout",
        ),
        click.option("--timestamp", is_flag=True, help="Add a '# generated=' header line"),
        click.option(
            "--metrics-file", type=click.Path(dir_okay=False, path_type=Path),
            help="Write Prometheus metrics here after the run",
        ),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def _fail(message: str, metrics_file: Path | None = None) -> NoReturn:
    click.echo(f"Error: {message}", err=True)
    _finish(EXIT_USAGE, metrics_file)


def _finish(code: int, metrics_file: Path | None) -> NoReturn:
    if metrics_file is not None:
        write_metrics(str(metrics_file))
    sys.exit(code)


def _load(command: Command, config_path: Path | None, sets: tuple[str, ...]) -> RunConfig:
    cfg = load_run_config(command, config_path, parse_overrides(sets))
    override_settings(**cfg.settings_overrides())
    return cfg


def _timestamp(enabled: bool) -> str | None:
    return pendulum.now("UTC").to_iso8601_string() if enabled else None


def _open(out: Path | None) -> TextIO:
    return click.open_file(str(out) if out else "-", "w", encoding="utf-8")


def _single[T](what: str, values: Sequence[T] | None) -> T:
    if not values or len(values) != 1:
        raise ConfigError(f"check needs exactly one {what}, got {len(values or ())}")
    return values[0]


@click.group(cls=ExpfracGroup)
@click.option("--log-level", default=None, help="Override EXPFRAC_LOG_LEVEL")
@click.option(
    "--log-format", type=click.Choice(["console", "json"]), default=None,
    help="Override EXPFRAC_LOG_FORMAT",
)
@click.pass_context
def cli(ctx: click.Context, log_level: str | None, log_format: str | None) -> None:
    """expfrac - exponential-kernel fractional integrals and Hermite-Hadamard type checks."""
    ctx.ensure_object(dict)
    settings = get_settings()
    level = (log_level or settings.log_level).upper()
    if level not in logging.getLevelNamesMapping():
        _fail(f"unknown log level {log_level!r}")
    configure_logging(level, log_format or settings.log_format)


@cli.command()
@run_options
def check(
    config_path: Path | None,
    sets: tuple[str, ...],
    out: Path | None,
    timestamp: bool,
    metrics_file: Path | None,
) -> None:
    """Check one inequality for one function (pair) and write its JSON report."""
    try:
        cfg = _load(Command.CHECK, config_path, sets)
        name = _single("inequality", cfg.inequality)
        alpha = FracOrder(_single("alpha", cfg.alpha))
        iv = _single("interval", cfg.interval)
        u = _single("function", cfg.function)
        report = run_check(
            name, u, alpha, iv, QuadratureConfig.from_settings(),
            partner=cfg.partner, weight=cfg.weight_on(iv) if name is InequalityName.FEJER else None,
            strict=cfg.strict, lax=cfg.lax,
        )
    except IntegrationError as e:
        click.echo(f"Inconclusive: {e}", err=True)
        _finish(EXIT_INCONCLUSIVE, metrics_file)
    except ExpfracError as e:
        _fail(f"{type(e).__name__}: {e}", metrics_file)

    with _open(out) as stream:
        writers.write_reports(stream, [report])
    click.echo(f"{report.name}: {report.verdict}", err=True)
    if not report.asserted:
        _finish(EXIT_OK, metrics_file)
    codes = {Verdict.HOLDS: EXIT_OK, Verdict.VIOLATED: EXIT_VIOLATED}
    _finish(codes.get(report.verdict, EXIT_INCONCLUSIVE), metrics_file)


@cli.command()
@run_options
@click.option(
    "--reports", type=click.Path(dir_okay=False, path_type=Path),
    help="Also write every report as JSON lines",
)
def sweep(
    config_path: Path | None,
    sets: tuple[str, ...],
    out: Path | None,
    timestamp: bool,
    metrics_file: Path | None,
    reports: Path | None,
) -> None:
    """Run inequality checks over a seeded corpus and write one CSV row per check."""
    try:
        cfg = _load(Command.SWEEP, config_path, sets)
        tasks = build_tasks(
            cfg.inequality, cfg.interval, cfg.alpha or DEFAULT_ALPHAS,
            seed=cfg.seed, size=cfg.size, shape=cfg.shape,
            expect_shape=cfg.expect_shape, functions=cfg.function,
        )
    except ExpfracError as e:
        _fail(f"{type(e).__name__}: {e}", metrics_file)

    result = run_sweep(tasks, QuadratureConfig.from_settings())
    with _open(out) as stream:
        writers.write_csv(
            stream, writers.SWEEP_SCHEMA, writers.SWEEP_COLUMNS,
            writers.sweep_rows(result.rows), timestamp=_timestamp(timestamp),
        )
    if reports is not None:
        with reports.open("w", encoding="utf-8") as stream:
            writers.write_reports(stream, (r.report for r in result.rows if r.report is not None))
    click.echo(result.summary(), err=True)
    _finish(result.exit_code, metrics_file)


@cli.command()
@run_options
def constants(
    config_path: Path | None,
    sets: tuple[str, ...],
    out: Path | None,
    timestamp: bool,
    metrics_file: Path | None,
) -> None:
    """Tabulate the kernel constants normalized by their classical values."""
    try:
        cfg = _load(Command.CONSTANTS, config_path, sets)
        iv = cfg.interval[0]
        if cfg.a_grid is None and cfg.alpha is None:
            cfg = cfg.model_copy(update={"a_grid": parse_grid(DEFAULT_A_GRID)})
        rows = constants_table(
            iv, scales=cfg.a_grid, alphas=cfg.alpha, include_classical=cfg.include_classical
        )
    except ExpfracError as e:
        _fail(f"{type(e).__name__}: {e}", metrics_file)

    with _open(out) as stream:
        writers.write_csv(
            stream, writers.CONSTANTS_SCHEMA, writers.CONSTANTS_COLUMNS,
            (row.as_row() for row in rows), timestamp=_timestamp(timestamp),
        )
    _finish(EXIT_OK, metrics_file)


@cli.command()
@run_options
def limits(
    config_path: Path | None,
    sets: tuple[str, ...],
    out: Path | None,
    timestamp: bool,
    metrics_file: Path | None,
) -> None:
    """Convergence table toward α = 1 (classical) or α → 0 (identity)."""
    try:
        cfg = _load(Command.LIMITS, config_path, sets)
        iv: Interval = cfg.interval[0]
        u: FunctionSpec = _single("function", cfg.function)
        quad = QuadratureConfig.from_settings()
        if cfg.limit == "identity":
            x = iv.midpoint if cfg.x is None else cfg.x
            result = identity_limit(
                u, x, iv, cfg.alpha or IDENTITY_LIMIT_ALPHAS, quad, side=cfg.side
            )
        else:
            name = cfg.inequality[0]
            result = classical_limit_sweep(
                name, u, iv, cfg.alpha or CLASSICAL_LIMIT_ALPHAS, quad,
                partner=cfg.partner,
                weight=cfg.weight_on(iv) if name is InequalityName.FEJER else None,
            )
    except ExpfracError as e:
        _fail(f"{type(e).__name__}: {e}", metrics_file)

    if not result.monotone:
        logger.warning("limit_not_monotone", term=result.term)
    with _open(out) as stream:
        writers.write_csv(
            stream, writers.LIMITS_SCHEMA, writers.LIMITS_COLUMNS,
            writers.limit_rows(result), timestamp=_timestamp(timestamp),
        )
    _finish(EXIT_OK, metrics_file)


@cli.command()
@run_options
def selftest(
    config_path: Path | None,
    sets: tuple[str, ...],
    out: Path | None,
    timestamp: bool,
    metrics_file: Path | None,
) -> None:
    """Run the reduced-scale invariant suite."""
    try:
        cfg = _load(Command.SELFTEST, config_path, sets)
    except ExpfracError as e:
        _fail(f"{type(e).__name__}: {e}", metrics_file)

    outcomes = run_selftest(cfg, QuadratureConfig.from_settings())
    with _open(out) as stream:
        writers.write_csv(
            stream, writers.SELFTEST_SCHEMA, writers.SELFTEST_COLUMNS,
            (o.as_row() for o in outcomes), timestamp=_timestamp(timestamp),
        )
    code = selftest_exit_code(outcomes)
    for outcome in outcomes:
        if outcome.status is not Status.PASS:
            click.echo(f"{outcome.status}: {outcome.check}: {outcome.detail}", err=True)
    _finish(code, metrics_file)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
