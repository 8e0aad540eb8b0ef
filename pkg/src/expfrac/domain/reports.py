"""Inequality reports and the three-way verdict."""

from __future__ import annotations

from collections.abc import Sequence
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from .base import Branch, Shape
from .parameters import FracOrder, Interval


class InequalityName(StrEnum):
    HH = "HH"
    FEJER = "Fejer"
    DA = "DA"
    PACHPATTE1 = "Pachpatte1"
    PACHPATTE2 = "Pachpatte2"


class Verdict(StrEnum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"
    # Sweep rows only: the check never ran because a precondition screen failed
    SCREEN_FAILED = "screen_failed"


class Term(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    value: float


def decide_verdict(slacks: Sequence[float], margin: float) -> Verdict:
    """holds iff every slack ≥ −margin; violated iff some slack < −10·margin."""
    if all(s >= -margin for s in slacks):
        return Verdict.HOLDS
    if any(s < -10.0 * margin for s in slacks):
        return Verdict.VIOLATED
    return Verdict.INCONCLUSIVE


class InequalityReport(BaseModel):
    """One evaluated inequality instance.

    Terms are listed in chain order and slacks are the adjacent differences in
    the asserted direction, so nonnegative slack means the inequality holds.
    """

    model_config = ConfigDict(frozen=True)

    name: InequalityName
    alpha: float
    a: float
    b: float
    A: float
    shape: Shape
    terms: list[Term]
    slacks: list[float]
    margin: float
    verdict: Verdict
    est_error: float = Field(ge=0.0)
    panels_used: int = 0
    coef_branch: Branch | None = None
    # False in lax mode: the hypotheses were not screened, the verdict is informational
    asserted: bool = True

    @property
    def order(self) -> FracOrder:
        return FracOrder(self.alpha)

    @property
    def interval(self) -> Interval:
        return Interval(self.a, self.b)

    def term(self, name: str) -> float:
        for t in self.terms:
            if t.name == name:
                return t.value
        raise KeyError(name)

    @property
    def values(self) -> list[float]:
        return [t.value for t in self.terms]
