from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuple_interp.polynomial import MaxMin, OutsideFragment, Poly, nat_max, nat_min, record_lattice_args

X, Y = Poly.var("x"), Poly.var("y")
VARS = ("x", "y", "z")


def test_poly_arithmetic_examples():
    p = (X + Poly.const(1)) * (X + Poly.const(1))
    assert p == X * X + X.scale(2) + Poly.const(1)
    assert p.degree == 2 and p.constant == 1
    assert (X * Y).variables() == {"x", "y"}
    assert p.evaluate({"x": 3}) == 16


def test_dominates_is_coefficientwise():
    assert (X + Y + Poly.const(1)).dominates(X + Y, surplus=1)
    assert not (X + Y).dominates(X + Y, surplus=1)
    assert not X.dominates(Y)


def test_integer_valued():
    tri = (X * (X + Poly.const(1))).scale(Fraction(1, 2))
    assert tri.is_integer_valued()
    assert not X.scale(Fraction(1, 2)).is_integer_valued()


def test_floordiv_only_for_exact_division():
    tri = MaxMin.lift(X * (X + Poly.const(1))) // 2
    assert tri.evaluate({"x": 4}) == 10
    with pytest.raises(OutsideFragment):
        MaxMin.var("x") // 2


def test_compose_and_single_variable():
    p = X * Y + Poly.const(2)
    assert p.compose({"x": Y + Poly.const(1)}) == Y * Y + Y + Poly.const(2)
    assert X.single_variable() == "x"
    assert (X + Poly.const(1)).single_variable() is None
    assert MaxMin.var("y").single_variable() == "y"


def test_max_min_normal_form():
    m = MaxMin.var("x").max(MaxMin.var("x") + MaxMin.lift(1))
    assert m == MaxMin.var("x") + MaxMin.lift(1)
    n = MaxMin.var("x").min(MaxMin.var("x") + MaxMin.lift(1))
    assert n == MaxMin.var("x")
    assert MaxMin.var("x").max(MaxMin.var("y")).geq(MaxMin.var("y"))
    assert not MaxMin.var("x").geq(MaxMin.var("x").max(MaxMin.var("y")))


def test_lattice_helpers_on_ints_and_symbols():
    assert nat_max(2, 5) == 5 and nat_min(2, 5) == 2
    with record_lattice_args() as pairs:
        nat_max(MaxMin.var("x"), 3)
        nat_max(1, 2)
    assert pairs == [(MaxMin.var("x"), MaxMin.lift(3))]


def test_upper_poly_examples():
    m = MaxMin.var("x").max(MaxMin.var("y"))
    assert m.upper_poly() == X + Y
    assert MaxMin.var("x").min(MaxMin.var("y") * MaxMin.var("y")).upper_poly() == X


# -------------------------------------------- symbolic vs concrete evaluation


@st.composite
def exprs(draw, depth=3):
    """A pair (symbolic builder, concrete builder) over the variables x, y, z."""
    if depth == 0 or draw(st.booleans()):
        if draw(st.booleans()):
            c = draw(st.integers(0, 3))
            return lambda env: c, lambda env: c
        v = draw(st.sampled_from(VARS))
        return lambda env: MaxMin.var(v), lambda env: env[v]
    op = draw(st.sampled_from(["+", "*", "max", "min"]))
    ls, lc = draw(exprs(depth=depth - 1))
    rs, rc = draw(exprs(depth=depth - 1))
    sym = {
        "+": lambda a, b: MaxMin.lift(a) + b,
        "*": lambda a, b: MaxMin.lift(a) * b,
        "max": nat_max,
        "min": nat_min,
    }[op]
    num = {"+": int.__add__, "*": int.__mul__, "max": max, "min": min}[op]
    return (lambda env: sym(ls(env), rs(env))), (lambda env: num(lc(env), rc(env)))


envs = st.fixed_dictionaries({v: st.integers(0, 6) for v in VARS})


@settings(max_examples=300, deadline=None)
@given(exprs(), envs)
def test_normal_form_evaluates_like_the_expression(e, env):
    sym, num = e
    assert MaxMin.lift(sym(env)).evaluate(env) == num(env)


@settings(max_examples=300, deadline=None)
@given(exprs(), envs)
def test_upper_poly_bounds_value(e, env):
    sym, num = e
    assert MaxMin.lift(sym(env)).upper_poly().evaluate(env) >= num(env)


@settings(max_examples=300, deadline=None)
@given(exprs(), exprs(), st.integers(0, 2), st.lists(envs, min_size=5, max_size=5))
def test_geq_is_sound(a, b, surplus, points):
    left, right = MaxMin.lift(a[0]({})), MaxMin.lift(b[0]({}))
    if left.geq(right, surplus):
        for env in points:
            assert a[1](env) >= b[1](env) + surplus


@settings(max_examples=200, deadline=None)
@given(exprs(), exprs(), envs)
def test_compose_commutes_with_evaluation(a, b, env):
    outer = MaxMin.lift(a[0]({}))
    inner = MaxMin.lift(b[0]({})).upper_poly()
    composed = outer.compose({"x": inner})
    shifted = dict(env, x=int(inner.evaluate(env)))
    assert composed.evaluate(env) == outer.evaluate(shifted)
