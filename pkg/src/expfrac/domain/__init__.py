"""Domain models for expfrac."""

from .base import (
    Branch,
    ConfigError,
    DomainError,
    Evaluable,
    ExpfracError,
    HypothesisViolation,
    IntegrationError,
    NegativeFunction,
    NoDerivative,
    NonConvergent,
    Shape,
    ShapeUnknown,
    Side,
    WeightInvalid,
)
from .corpus import CONVEX_FAMILIES, SMOOTH_FAMILIES, CorpusEntry, random_convex
from .functions import (
    FUNCTION_ADAPTER,
    Exponential,
    Family,
    FunctionSpec,
    Negated,
    PiecewiseLinear,
    PowerAbs,
    Product,
    Quadratic,
    check_convexity,
    evaluate,
    evaluate_derivative,
    negated,
)
from .parameters import FracOrder, Interval
from .reports import InequalityName, InequalityReport, Term, Verdict
from .weights import WeightSpec, make_weight

__all__ = [
    "CONVEX_FAMILIES",
    "FUNCTION_ADAPTER",
    "SMOOTH_FAMILIES",
    "Branch",
    "ConfigError",
    "CorpusEntry",
    "DomainError",
    "Evaluable",
    "ExpfracError",
    "Exponential",
    "Family",
    "FracOrder",
    "FunctionSpec",
    "HypothesisViolation",
    "InequalityName",
    "InequalityReport",
    "IntegrationError",
    "Interval",
    "Negated",
    "NegativeFunction",
    "NoDerivative",
    "NonConvergent",
    "PiecewiseLinear",
    "PowerAbs",
    "Product",
    "Quadratic",
    "Shape",
    "ShapeUnknown",
    "Side",
    "Term",
    "Verdict",
    "WeightInvalid",
    "WeightSpec",
    "check_convexity",
    "evaluate",
    "evaluate_derivative",
    "make_weight",
    "negated",
    "random_convex",
]
