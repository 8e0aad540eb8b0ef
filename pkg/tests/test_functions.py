"""Tests for the function families, the seeded corpora and the Fejér weights."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from expfrac.domain import (
    CONVEX_FAMILIES,
    FUNCTION_ADAPTER,
    DomainError,
    Exponential,
    Family,
    Interval,
    NoDerivative,
    PiecewiseLinear,
    PowerAbs,
    Product,
    Quadratic,
    Shape,
    WeightSpec,
    make_weight,
    negated,
    random_convex,
)
from expfrac.domain.corpus import NONNEG_MARGIN, concave_corpus, convex_corpus
from expfrac.domain.functions import (
    check_convexity,
    evaluate,
    evaluate_derivative,
    grid_minimum,
    midpoint_convex,
)

from .conftest import STANDARD_INTERVALS


def test_quadratic_values_and_shape(square):
    assert evaluate(square, [0.0, 2.0, -3.0]).tolist() == [0.0, 4.0, 9.0]
    assert evaluate_derivative(square, 1.5) == 3.0
    assert square.shape is Shape.CONVEX
    assert square.scaled(-2.0).shape is Shape.CONCAVE


def test_power_abs_kink_has_no_derivative(kink):
    assert kink.breakpoints == (0.5,)
    assert not kink.has_derivative
    with pytest.raises(NoDerivative):
        evaluate_derivative(kink, 0.2)

    smooth = PowerAbs(center=0.5, power=2.0)
    assert evaluate_derivative(smooth, 1.0) == pytest.approx(1.0)


def test_power_abs_rejects_power_below_one():
    with pytest.raises(ValidationError):
        PowerAbs(power=0.5)


def test_piecewise_linear_evaluation():
    """Slope −1 up to x = 1, slope 1 afterwards, value 0 at x = 0."""
    f = PiecewiseLinear(breaks=(0.0, 1.0), slopes=(-1.0, 1.0))
    assert evaluate(f, [-1.0, 0.0, 1.0, 2.0]).tolist() == [1.0, 0.0, -1.0, 0.0]
    assert f.breakpoints == (0.0, 1.0)
    assert f.shape is Shape.CONVEX


def test_piecewise_linear_validation():
    with pytest.raises(ValidationError):
        PiecewiseLinear(breaks=(0.0, 1.0), slopes=(1.0, -1.0))
    with pytest.raises(ValidationError):
        PiecewiseLinear(breaks=(1.0, 0.0), slopes=(0.0, 1.0))
    with pytest.raises(ValidationError):
        PiecewiseLinear(breaks=(), slopes=())


def test_negated_flips_certificate(exp_fn):
    neg = negated(exp_fn)
    assert neg.shape is Shape.CONCAVE
    assert negated(neg) == exp_fn
    assert evaluate(neg, 0.0) == -1.0
    assert evaluate_derivative(neg, 0.0) == -1.0


def test_uncertified_function_has_unknown_shape():
    f = Quadratic(c2=1.0, certified=False)
    assert f.shape is Shape.UNKNOWN
    assert negated(f).shape is Shape.UNKNOWN


def test_function_spec_parses_by_family():
    f = FUNCTION_ADAPTER.validate_json(
        '{"family": "negated", "inner": {"family": "power_abs", "center": 0.5, "power": 1}}'
    )
    assert f.shape is Shape.CONCAVE
    assert f.family_name == "negated"
    assert f.breakpoints == (0.5,)
    with pytest.raises(ValidationError):
        FUNCTION_ADAPTER.validate_python({"family": "sine"})


def test_evaluate_rejects_non_finite(square):
    with pytest.raises(DomainError):
        evaluate(square, [0.0, np.nan])


def _central_errors(f, x, steps):
    exact = evaluate_derivative(f, x)
    return [
        float(np.max(np.abs((evaluate(f, x + h) - evaluate(f, x - h)) / (2.0 * h) - exact)))
        for h in steps
    ]


@pytest.mark.parametrize(
    "f, x",
    [
        (Exponential(rate=1.0, scale=2.0), np.array([-1.5, 0.0, 0.7, 2.5])),
        (Exponential(rate=-0.8, center=0.5, offset=1.0), np.array([-2.0, 0.25, 1.0, 3.0])),
        # Kink at 0.5 stays outside every stencil
        (PowerAbs(center=0.5, power=2.5, scale=0.3), np.array([-1.5, 0.0, 1.25, 2.5])),
    ],
)
def test_derivative_matches_central_differences(f, x):
    """Halving h from 1e-2 towards 1e-4 shrinks the error at second order."""
    steps = [1e-2 * 0.5**k for k in range(7)]
    errors = _central_errors(f, x, steps)
    orders = [np.log2(e0 / e1) for e0, e1 in zip(errors, errors[1:], strict=False)]
    assert min(orders) >= 1.9, orders
    assert errors[-1] < 1e-6


def test_quadratic_derivative_central_differences_are_exact():
    f = Quadratic(c2=1.5, c1=-0.5, c0=2.0)
    x = np.array([-2.0, -0.3, 0.0, 1.7, 3.0])
    assert max(_central_errors(f, x, [1e-2, 1e-3, 1e-4])) < 1e-9


def test_convexity_screen(square, kink, exp_fn, unit):
    # Kink off the screening grid, so some grid pair straddles it
    offgrid = PowerAbs(center=1.0 / 3.0, power=1.0)
    for f in (square, kink, exp_fn, offgrid):
        assert check_convexity(f, unit)
    for f in (square, exp_fn, offgrid):
        assert not check_convexity(negated(f), unit)
    with pytest.raises(DomainError):
        midpoint_convex(square, unit, 2)


def test_product_breakpoints(kink):
    weight = WeightSpec(profile=PowerAbs(center=0.0, power=1.0, offset=1.0), a=0.0, b=2.0)
    product = Product(kink, weight)
    assert product.breakpoints == (0.5, 1.0)
    assert float(product(0.0)) == pytest.approx(0.5 * 2.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=100_000), st.sampled_from(CONVEX_FAMILIES))
def test_random_convex_is_certified_and_convex(seed, family):
    for iv in STANDARD_INTERVALS:
        f = random_convex(seed, family, iv)
        assert f.shape is Shape.CONVEX
        assert f.family_name == str(family)
        assert check_convexity(f, iv)


def test_random_convex_is_deterministic(unit):
    for family in CONVEX_FAMILIES:
        assert random_convex(42, family, unit) == random_convex(42, family, unit)


def test_random_convex_rejects_negated_family(unit):
    with pytest.raises(ValueError):
        random_convex(0, Family.NEGATED, unit)


def test_nonnegative_corpus_stays_above_margin():
    for iv in STANDARD_INTERVALS:
        for entry in convex_corpus(seed=100, size=16, iv=iv, nonneg=True):
            assert grid_minimum(entry.function, iv) >= NONNEG_MARGIN - 1e-12
            assert entry.function.shape is Shape.CONVEX


def test_corpus_cycles_families(unit):
    corpus = convex_corpus(seed=9, size=8, iv=unit)
    assert [e.family for e in corpus] == list(CONVEX_FAMILIES) * 2
    assert [e.seed for e in corpus] == list(range(9, 17))


def test_concave_corpus_negates_convex_corpus(unit):
    convex = convex_corpus(seed=4, size=5, iv=unit)
    concave = concave_corpus(seed=4, size=5, iv=unit)
    for c, n in zip(convex, concave, strict=True):
        assert n.family is Family.NEGATED
        assert n.function.shape is Shape.CONCAVE
        assert evaluate(n.function, 0.3) == -evaluate(c.function, 0.3)


def test_constant_weight(unit):
    v = WeightSpec.constant(unit)
    assert v(np.array([0.0, 0.3, 1.0])).tolist() == [1.0, 1.0, 1.0]
    assert v.symmetry_defect() == 0.0
    assert v.minimum() == 1.0


def test_weight_is_symmetric_by_construction():
    """v(a + b − x) = v(x) on dyadic points for any profile."""
    v = WeightSpec(profile=Exponential(rate=-3.0), a=0.0, b=4.0)
    x = np.linspace(0.0, 4.0, 65)
    assert np.array_equal(v(4.0 - x), v(x))
    assert v.breakpoints == (2.0,)


@pytest.mark.parametrize("grid_n", [2, 10, 11, 1001])
def test_weight_mirrored_grid_is_exactly_symmetric(grid_n):
    iv = Interval(-2.0, 3.0)
    v = WeightSpec(profile=PowerAbs(center=0.0, power=2.7, scale=0.4, offset=0.1), a=-2.0, b=3.0)
    x, dist = v.mirrored_grid(grid_n)
    assert len(x) == len(dist) == grid_n
    assert (x[0], x[-1]) == (iv.a, iv.b)
    assert np.all(np.diff(x) > 0.0)
    assert np.array_equal(dist, dist[::-1])
    np.testing.assert_allclose(x + x[::-1], iv.a + iv.b, rtol=0.0, atol=1e-14)

    mirrored_x, values = v.mirrored_values(grid_n)
    assert np.array_equal(mirrored_x, x)
    assert np.array_equal(values, values[::-1])
    np.testing.assert_allclose(values, v(x), rtol=1e-14)
    assert v.symmetry_defect(grid_n) == 0.0


def test_weight_mirrored_grid_needs_two_nodes(unit):
    with pytest.raises(DomainError):
        WeightSpec.constant(unit).mirrored_grid(1)


def test_weight_rejects_empty_interval():
    with pytest.raises(DomainError):
        WeightSpec(profile=Quadratic(c0=1.0), a=1.0, b=1.0)


@pytest.mark.parametrize("iv", STANDARD_INTERVALS)
def test_seeded_weights_are_admissible(iv):
    """Every seeded weight is nonnegative and symmetric; seed 0 family members vary."""
    kinds = set()
    for seed in range(60):
        v = make_weight(seed, iv)
        kinds.add(v.profile.family_name)
        assert v.minimum() >= 0.0
        assert v.symmetry_defect() == 0.0
        assert make_weight(seed, iv) == v
    assert {"quadratic", "power_abs", "exponential"} <= kinds


def test_weight_breakpoints_mirror_profile_kinks():
    v = WeightSpec(profile=PowerAbs(center=0.5, power=1.0), a=0.0, b=2.0)
    assert v.breakpoints == (0.5, 1.0, 1.5)
