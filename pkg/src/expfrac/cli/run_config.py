"""Run configuration: a flat `key = value` file plus `--set` overrides.

Values are strings in the file and are turned into typed fields here:

    alpha      = 0.05, 0.5, 1
    interval   = 0:1, -2:3
    function   = quadratic:c2=1 ; negated:power_abs:center=0.5,power=1
    weight     = power_abs:center=0,power=1,scale=1,offset=1
    a_grid     = log:1e-8:1e2:21

A function is `family:key=value,...` with `|` separating list items, a
`negated:` prefix, or a JSON object.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from expfrac.config import MAX_SUBDIVISIONS_LIMIT
from expfrac.domain import (
    FUNCTION_ADAPTER,
    ConfigError,
    DomainError,
    FunctionSpec,
    InequalityName,
    Interval,
    Shape,
    Side,
    WeightSpec,
)

# Acceptance grid of fractional orders
DEFAULT_ALPHAS = (0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0)


class Command(StrEnum):
    CHECK = "check"
    SWEEP = "sweep"
    CONSTANTS = "constants"
    LIMITS = "limits"
    SELFTEST = "selftest"


def _split(raw: str, sep: str = ",") -> list[str]:
    return [part.strip() for part in raw.split(sep) if part.strip()]


def _scalar(raw: str) -> Any:
    lowered = raw.lower()
    if lowered in {"true", "false"}:
        return lowered == "true"
    if "|" in raw:
        return [float(item) for item in _split(raw, "|")]
    return raw


def parse_function(raw: str) -> FunctionSpec:
    """Compact or JSON function syntax to a validated FunctionSpec."""
    text = raw.strip()
    try:
        if text.startswith("{"):
            return FUNCTION_ADAPTER.validate_python(json.loads(text))
        return FUNCTION_ADAPTER.validate_python(_compact(text))
    except (ValidationError, ValueError) as e:
        raise ConfigError(f"invalid function {raw!r}: {e}") from e


def _compact(text: str) -> dict[str, Any]:
    family, _, rest = text.partition(":")
    family = family.strip()
    if family == "negated":
        return {"family": "negated", "inner": _compact(rest)}
    fields: dict[str, Any] = {"family": family}
    for item in _split(rest):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value, got {item!r}")
        fields[key.strip()] = _scalar(value.strip())
    return fields


def parse_interval(raw: str) -> Interval:
    lo, sep, hi = raw.strip().partition(":")
    if not sep:
        raise ConfigError(f"interval must look like a:b, got {raw!r}")
    try:
        return Interval(float(lo), float(hi))
    except (ValueError, DomainError) as e:
        raise ConfigError(f"invalid interval {raw!r}: {e}") from e


def parse_grid(raw: str) -> list[float]:
    """`log:lo:hi:n`, `lin:lo:hi:n` or an explicit comma-separated list."""
    kind, _, rest = raw.strip().partition(":")
    if kind in {"log", "lin"}:
        try:
            lo, hi, n = rest.split(":")
            if kind == "log":
                values = np.logspace(np.log10(float(lo)), np.log10(float(hi)), int(n))
            else:
                values = np.linspace(float(lo), float(hi), int(n))
        except ValueError as e:
            raise ConfigError(f"invalid grid {raw!r}: {e}") from e
        return [float(v) for v in values]
    try:
        return [float(v) for v in _split(raw)]
    except ValueError as e:
        raise ConfigError(f"invalid grid {raw!r}: {e}") from e


class RunConfig(BaseModel):
    """Everything one command needs; identical configs give identical output."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    inequality: list[InequalityName] = Field(default_factory=lambda: [InequalityName.HH])
    # Unset means the command default
    alpha: list[float] | None = None
    interval: list[Interval] = Field(default_factory=lambda: [Interval(0.0, 1.0)])
    function: list[FunctionSpec] | None = None
    partner: FunctionSpec | None = None
    weight: FunctionSpec | None = None

    # Corpus
    seed: int = 0
    size: int = Field(default=0, ge=0)
    shape: Shape = Shape.CONVEX
    expect_shape: Shape | None = None

    # Hypothesis screens
    strict: bool = False
    lax: bool = False

    # Quadrature overrides; unset falls back to Settings
    abs_tol: float | None = Field(default=None, gt=0.0, lt=1.0)
    rel_tol: float | None = Field(default=None, gt=0.0, lt=1.0)
    max_subdivisions: int | None = Field(default=None, gt=0, le=MAX_SUBDIVISIONS_LIMIT)
    verdict_floor: float | None = Field(default=None, gt=0.0)
    workers: int | None = Field(default=None, ge=1)

    # constants
    a_grid: list[float] | None = None
    include_classical: bool = False

    # limits
    limit: Literal["classical", "identity"] = "classical"
    x: float | None = None
    side: Side = Side.LEFT

    # selftest
    corpus_size: int = Field(default=12, ge=1)

    @field_validator("inequality", mode="before")
    @classmethod
    def _split_inequalities(cls, v: Any) -> Any:
        return _split(v) if isinstance(v, str) else v

    @field_validator("alpha", mode="before")
    @classmethod
    def _split_alphas(cls, v: Any) -> Any:
        return parse_grid(v) if isinstance(v, str) else v

    @field_validator("a_grid", mode="before")
    @classmethod
    def _parse_a_grid(cls, v: Any) -> Any:
        return parse_grid(v) if isinstance(v, str) else v

    @field_validator("interval", mode="before")
    @classmethod
    def _parse_intervals(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [parse_interval(part) for part in _split(v)]
        return v

    @field_validator("function", mode="before")
    @classmethod
    def _parse_functions(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [parse_function(part) for part in _split(v, ";")]
        return v

    @field_validator("partner", "weight", mode="before")
    @classmethod
    def _parse_function(cls, v: Any) -> Any:
        return parse_function(v) if isinstance(v, str) else v

    @field_validator("shape", "expect_shape")
    @classmethod
    def _known_shape(cls, v: Shape | None) -> Shape | None:
        if v is Shape.UNKNOWN:
            raise ValueError("shape must be convex or concave")
        return v

    @field_validator("alpha")
    @classmethod
    def _check_alphas(cls, v: list[float] | None) -> list[float] | None:
        bad = [a for a in v or () if not 0.0 < a <= 1.0]
        if bad:
            raise ValueError(f"alpha must lie in (0, 1], got {bad}")
        return v

    def settings_overrides(self) -> dict[str, Any]:
        """Settings fields this config pins; the rest come from the environment."""
        fields = ("abs_tol", "rel_tol", "max_subdivisions", "verdict_floor", "workers")
        return {f: getattr(self, f) for f in fields if getattr(self, f) is not None}

    def weight_on(self, iv: Interval) -> WeightSpec:
        """The configured weight profile on iv; v ≡ 1 when none is given."""
        if self.weight is None:
            return WeightSpec.constant(iv)
        return WeightSpec(profile=self.weight, a=iv.a, b=iv.b)


def parse_overrides(pairs: tuple[str, ...]) -> dict[str, str]:
    overrides = {}
    for pair in pairs:
        key, eq, value = pair.partition("=")
        if not eq or not key.strip():
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        overrides[key.strip()] = value.strip()
    return overrides


def load_run_config(
    command: Command | str,
    path: Path | None = None,
    overrides: Mapping[str, str] | None = None,
) -> RunConfig:
    """Read the config file (if any), apply overrides, validate."""
    raw: dict[str, Any] = {}
    if path is not None:
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        values = dotenv_values(path, interpolate=False, encoding="utf-8")
        raw.update({k: v for k, v in values.items() if v is not None})
    raw.update(overrides or {})
    raw["command"] = str(command)
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration: {e}") from e
