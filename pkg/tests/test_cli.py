"""End-to-end tests for the expfrac command line: payloads and exit codes."""

import csv
import io
import json
from collections.abc import Generator
from pathlib import Path

import pytest
import structlog
from click.testing import CliRunner, Result

from expfrac.cli.main import cli
from expfrac.cli.run_config import Command, load_run_config, parse_function, parse_grid
from expfrac.cli.selftest import Status, tolerance_lint
from expfrac.config import reset_settings
from expfrac.domain import ConfigError, InequalityName, Interval, Shape
from expfrac.services.integrators import QuadratureConfig


@pytest.fixture(autouse=True)
def reset_logging() -> Generator[None, None, None]:
    """The CLI binds structlog to the runner's stderr; unbind it afterwards."""
    yield
    structlog.reset_defaults()


def invoke(command: str, *sets: str, extra: tuple[str, ...] = ()) -> Result:
    args = [command]
    for item in sets:
        args += ["--set", item]
    return CliRunner().invoke(cli, [*args, *extra])


def table(text: str) -> list[dict[str, str]]:
    """Data rows of a CSV payload, comment lines skipped."""
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_check_hh_square_holds():
    result = invoke(
        "check", "inequality=HH", "function=quadratic:c2=1", "alpha=0.5", "interval=0:1"
    )
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["name"] == "HH"
    assert report["verdict"] == "holds"
    assert [t["name"] for t in report["terms"]] == ["lhs", "mid", "rhs"]
    assert "HH: holds" in result.stderr


def test_check_uncertified_function_is_rejected():
    result = invoke("check", "function=quadratic:c2=1,certified=false", "alpha=0.5")
    assert result.exit_code == 1
    assert "ShapeUnknown" in result.stderr
    assert result.stdout == ""


def test_check_dragomir_agarwal_linear():
    """A linear u has zero gap against a positive bound."""
    result = invoke("check", "inequality=DA", "function=quadratic:c1=2", "alpha=0.25")
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["terms"][0]["value"] == pytest.approx(0.0, abs=1e-9)


def test_check_needs_a_single_function():
    result = invoke("check", "alpha=0.5")
    assert result.exit_code == 1
    assert "ConfigError" in result.stderr


def test_check_reads_config_file(tmp_path: Path):
    config = tmp_path / "run.env"
    config.write_text(
        "inequality = Fejer\n"
        "function = exponential:rate=1\n"
        "weight = power_abs:center=0,power=1,offset=1\n"
        "alpha = 0.75\n"
        "interval = -2:3\n",
        encoding="utf-8",
    )
    result = CliRunner().invoke(cli, ["check", "--config", str(config)])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["name"] == "Fejer"
    assert (report["a"], report["b"]) == (-2.0, 3.0)


def test_missing_config_file():
    result = CliRunner().invoke(cli, ["check", "--config", "/nonexistent/run.env"])
    assert result.exit_code == 1
    assert "config file not found" in result.stderr


def test_usage_errors_exit_one():
    runner = CliRunner()
    assert runner.invoke(cli, ["frobnicate"]).exit_code == 1
    assert runner.invoke(cli, ["check", "--bogus"]).exit_code == 1
    assert invoke("check", "novalue").exit_code == 1
    assert invoke("check", "colour=blue").exit_code == 1
    assert invoke("check", "alpha=1.5", "function=quadratic:c2=1").exit_code == 1


def test_metrics_file_is_written(tmp_path: Path):
    metrics = tmp_path / "metrics.prom"
    result = invoke(
        "check", "function=quadratic:c2=1", "alpha=0.5",
        extra=("--metrics-file", str(metrics)),
    )
    assert result.exit_code == 0, result.stderr
    text = metrics.read_text(encoding="utf-8")
    assert 'expfrac_checks_total{inequality="HH",verdict="holds"}' in text
    assert "expfrac_quadrature_duration_seconds" in text


def test_sweep_output_is_byte_deterministic():
    sets = ("inequality=HH,DA", "interval=0:1,-2:3", "alpha=0.1,1", "seed=3", "size=3")
    first = invoke("sweep", *sets)
    second = invoke("sweep", *sets)
    assert first.exit_code == 0, first.stderr
    assert first.stdout == second.stdout
    assert first.stdout.startswith("# schema=sweep/v1\ninequality,seed,family,")
    rows = table(first.stdout)
    assert len(rows) == 2 * 2 * 3 * 2
    assert {r["verdict"] for r in rows} == {"holds"}
    assert "total=24" in first.stderr


def test_sweep_timestamp_line():
    result = invoke("sweep", "size=1", "alpha=0.5", extra=("--timestamp",))
    lines = result.stdout.splitlines()
    assert lines[0] == "# schema=sweep/v1"
    assert lines[1].startswith("# generated=")
    assert lines[2].startswith("inequality,")


def test_empty_corpus_writes_header_only():
    result = invoke("sweep", "size=0")
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["# schema=sweep/v1", ",".join(
        ("inequality", "seed", "family", "alpha", "A", "a", "b",
         "term0", "term1", "term2", "slack0", "slack1",
         "margin", "verdict", "panels_used", "coef_branch", "error")
    )]


def test_concave_function_flagged_in_convex_sweep():
    result = invoke(
        "sweep", "function=quadratic:c2=1;negated:quadratic:c2=1", "alpha=0.5"
    )
    assert result.exit_code == 1
    rows = table(result.stdout)
    assert [r["verdict"] for r in rows] == ["holds", "screen_failed"]
    assert rows[1]["family"] == "negated"
    assert rows[1]["error"].startswith("ShapeUnknown")


def test_sweep_writes_reports_and_out_file(tmp_path: Path):
    out = tmp_path / "sweep.csv"
    reports = tmp_path / "reports.jsonl"
    result = invoke(
        "sweep", "inequality=Pachpatte1,Pachpatte2", "size=2", "alpha=0.5",
        extra=("--out", str(out), "--reports", str(reports)),
    )
    assert result.exit_code == 0, result.stderr
    assert result.stdout == ""
    assert len(table(out.read_text(encoding="utf-8"))) == 4
    lines = reports.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line)["name"] for line in lines] == ["Pachpatte1"] * 2 + ["Pachpatte2"] * 2


def test_constants_table_near_and_at_classical():
    result = invoke("constants", "a_grid=1e-8,1", "include_classical=true")
    assert result.exit_code == 0, result.stderr
    rows = table(result.stdout)
    norm_columns = [c for c in rows[0] if c.endswith("_norm")]
    assert len(norm_columns) == 6

    classical, tiny, unit = rows
    assert float(classical["A"]) == 0.0
    assert float(classical["alpha"]) == 1.0
    assert all(float(classical[c]) == 1.0 for c in norm_columns)

    assert tiny["branch"] == "series"
    assert all(abs(float(tiny[c]) - 1.0) <= 1e-7 for c in norm_columns)
    assert unit["branch"] == "direct"


def test_constants_default_grid():
    rows = table(invoke("constants").stdout)
    assert len(rows) == 21
    assert float(rows[0]["A"]) == pytest.approx(1e-8)
    assert float(rows[-1]["A"]) == pytest.approx(1e2)


def test_limits_classical_error_shrinks():
    result = invoke("limits", "function=quadratic:c2=1")
    assert result.exit_code == 0, result.stderr
    rows = table(result.stdout)
    assert [float(r["alpha"]) for r in rows] == [0.9, 0.99, 0.999, 1.0]
    errors = [float(r["abs_error"]) for r in rows]
    assert errors[0] > errors[1] > errors[2]
    assert float(rows[-1]["value"]) == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_limits_constant_function_has_no_error():
    rows = table(invoke("limits", "function=quadratic:c0=2").stdout)
    assert all(float(r["abs_error"]) < 1e-12 for r in rows)


def test_limits_identity_side():
    result = invoke(
        "limits", "limit=identity", "function=exponential:rate=1", "x=0.25", "side=right"
    )
    assert result.exit_code == 0, result.stderr
    errors = [float(r["abs_error"]) for r in table(result.stdout)]
    assert errors == sorted(errors, reverse=True)


def test_selftest_passes():
    result = invoke("selftest", "corpus_size=2")
    assert result.exit_code == 0, result.stderr
    rows = table(result.stdout)
    assert rows[0]["check"] == "tolerance_lint"
    assert {r["status"] for r in rows} == {"pass"}


def test_selftest_loose_tolerance_is_inconclusive():
    result = invoke("selftest", "corpus_size=2", "abs_tol=0.1")
    assert result.exit_code == 3
    rows = {r["check"]: r["status"] for r in table(result.stdout)}
    assert rows["tolerance_lint"] == "inconclusive"
    assert rows["classical_constants"] == "pass"
    assert "fail" not in rows.values()


def test_tolerance_lint_reads_configuration_only(monkeypatch: pytest.MonkeyPatch):
    assert tolerance_lint(QuadratureConfig(abs_tol=1e-10)).status is Status.PASS
    assert tolerance_lint(QuadratureConfig(abs_tol=1e-9)).status is Status.INCONCLUSIVE
    monkeypatch.setenv("EXPFRAC_VERDICT_FLOOR", "1e-6")
    reset_settings()
    assert tolerance_lint(QuadratureConfig(abs_tol=1e-9)).status is Status.PASS


def test_log_format_json_goes_to_stderr():
    result = CliRunner().invoke(
        cli, ["--log-level", "info", "--log-format", "json", "sweep", "--set", "size=0"]
    )
    assert result.exit_code == 0
    events = [json.loads(line) for line in result.stderr.splitlines() if line.startswith("{")]
    assert any(e["event"] == "sweep_started" for e in events)
    assert result.stdout.startswith("# schema=sweep/v1")


def test_run_config_parsing():
    cfg = load_run_config(
        Command.SWEEP,
        overrides={
            "inequality": "HH, Pachpatte2",
            "interval": "0:1, -2:3",
            "alpha": "lin:0.5:1:3",
            "shape": "concave",
            "abs_tol": "1e-12",
        },
    )
    assert cfg.inequality == [InequalityName.HH, InequalityName.PACHPATTE2]
    assert cfg.interval == [Interval(0.0, 1.0), Interval(-2.0, 3.0)]
    assert cfg.alpha == [0.5, 0.75, 1.0]
    assert cfg.shape is Shape.CONCAVE
    assert cfg.settings_overrides() == {"abs_tol": 1e-12}


def test_parse_function_syntaxes():
    compact = parse_function("piecewise_linear:breaks=0|1,slopes=-1|1")
    as_json = parse_function('{"family": "piecewise_linear", "breaks": [0, 1], "slopes": [-1, 1]}')
    assert compact == as_json
    assert parse_function("negated:power_abs:center=0.5,power=1").shape is Shape.CONCAVE
    with pytest.raises(ConfigError):
        parse_function("quadratic:c2")
    with pytest.raises(ConfigError):
        parse_grid("log:1:2")
