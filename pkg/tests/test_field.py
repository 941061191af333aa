from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from invym.field import (
    ONE, ZERO, FieldError, RatFunc, diff, evaluate, is_zero, parse, scalar, subs, to_text, var, variables,
)

NAMES = ["a", "b", "d", "x1"]

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, max_terms=3):
    total = ZERO
    for _ in range(draw(st.integers(1, max_terms))):
        term = scalar(draw(st.integers(-4, 4)))
        for name in draw(st.lists(st.sampled_from(NAMES), max_size=3)):
            term = term * var(name)
        total = total + term
    return total


@st.composite
def ratfuncs(draw):
    num = draw(polys())
    den = draw(polys())
    if is_zero(den):
        den = ONE
    return num / den


points = st.fixed_dictionaries({n: small.filter(lambda x: x != 0) for n in NAMES})


def test_parse_basic():
    assert parse("-3/a") == Fraction(-3) / var("a")
    assert parse("a^2*b") == var("a") ** 2 * var("b")
    assert parse("3/6") == Fraction(1, 2)
    assert isinstance(parse("a - a + 2"), Fraction)


def test_round_trip_examples():
    for text in ["-3/a", "1/(2*a)", "(a*b - 2*b*d)/(a^3 + 2*a^2*d)", "-b/a^2", "x2*x1 - 1"]:
        assert parse(to_text(parse(text))) == parse(text)
    assert to_text(parse("-3/a")) == "-3/a"


def test_proportional_collapse_and_gcd():
    assert parse("(a^2 - d^2)/(a - d)") == parse("a + d")
    assert to_text(parse("(a^2 - d^2)/(a - d)")) == "a + d"
    assert to_text(parse("(2*a + 4*d)/(a + 2*d)")) == "2"
    x = parse("(a*b + b*d)/(a^2 + 2*a*d + d^2)")
    assert to_text(x) == "b/(a + d)"


def test_bad_text():
    with pytest.raises(FieldError):
        parse("a +")
    with pytest.raises(FieldError):
        parse("a^b")
    with pytest.raises(ZeroDivisionError):
        parse("1/(a - a)")


def test_evaluate_and_subs():
    x = parse("(a + 1)/b")
    assert evaluate(x, {"a": 1, "b": 4}) == Fraction(1, 2)
    assert subs(x, {"a": "b - 1"}) == ONE
    with pytest.raises(FieldError):
        evaluate(x, {"a": 1})
    with pytest.raises(ZeroDivisionError):
        evaluate(x, {"a": 1, "b": 0})


def test_variables_and_unhashable():
    assert variables(parse("a*x1 + 1")) == {"a", "x1"}
    with pytest.raises(TypeError):
        hash(var("a"))


@given(ratfuncs())
def test_text_round_trip(x):
    assert parse(to_text(x)) == x


@given(ratfuncs(), ratfuncs(), ratfuncs())
@settings(max_examples=60, deadline=None)
def test_field_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO
    if not is_zero(x):
        assert x / x == ONE


@given(ratfuncs(), ratfuncs(), points)
@settings(max_examples=60, deadline=None)
def test_evaluation_is_a_homomorphism(x, y, pt):
    try:
        ex, ey = evaluate(x, pt), evaluate(y, pt)
    except ZeroDivisionError:
        return
    assert evaluate(x + y, pt) == ex + ey
    assert evaluate(x * y, pt) == ex * ey


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_gcd_reduction_is_exact(p, q):
    # p*q/q must simplify back to p exactly, numerator and denominator included
    if is_zero(q) or is_zero(p):
        return
    r = (p * q) / q
    assert r == p
    assert not isinstance(r, RatFunc) or r.den == {(): 1}


@given(ratfuncs(), ratfuncs())
@settings(max_examples=40, deadline=None)
def test_derivative_rules(x, y):
    assert diff(x + y, "a") == diff(x, "a") + diff(y, "a")
    assert diff(x * y, "a") == diff(x, "a") * y + x * diff(y, "a")
