from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuple_interp.terms import (
    Abs,
    App,
    Arrow,
    Base,
    BVar,
    FApp,
    FuncDecl,
    IllTyped,
    Signature,
    Var,
    alpha_eq,
    fapp,
    free_vars,
    lam,
    show,
    substitute,
    term_size,
    type_of,
)

NAT, LIST = Base("nat"), Base("list")
SIG = Signature(
    ["nat", "list"],
    [
        FuncDecl("0", (), NAT),
        FuncDecl("s", (NAT,), NAT),
        FuncDecl("plus", (NAT, NAT), NAT),
        FuncDecl("nil", (), LIST),
        FuncDecl("cons", (NAT, LIST), LIST),
        FuncDecl("map", (Arrow(NAT, NAT), LIST), LIST),
    ],
)
ZERO = fapp(SIG, "0")
NIL = fapp(SIG, "nil")
x, y, z = Var("x", NAT), Var("y", NAT), Var("z", NAT)
F = Var("F", Arrow(NAT, NAT))


def s(t):
    return fapp(SIG, "s", t)


def plus(a, b):
    return fapp(SIG, "plus", a, b)


def test_type_of_examples():
    assert type_of(fapp(SIG, "cons", ZERO, NIL), SIG) == LIST
    assert type_of(lam(x, x), SIG) == Arrow(NAT, NAT)
    assert type_of(fapp(SIG, "map", F, NIL), SIG) == LIST


def test_ill_typed_application_reports_position():
    with pytest.raises(IllTyped) as info:
        fapp(SIG, "cons", NIL, NIL)
    assert info.value.expected == NAT and info.value.found == LIST
    with pytest.raises(IllTyped):
        type_of(FApp("s", (NIL,), NAT), SIG)


def test_substitute_examples():
    assert substitute(x, {x: s(ZERO)}) == s(ZERO)
    captured = substitute(lam(x, y), {y: x})
    assert isinstance(captured, Abs) and captured.body == x
    assert show(captured) == "\\x1:nat. x"
    assert substitute(lam(x, plus(x, y)), {y: ZERO}) == lam(x, plus(x, ZERO))


def test_alpha_eq_examples():
    assert alpha_eq(lam(x, x), lam(y, y))
    assert not alpha_eq(lam(x, y), lam(x, x))
    assert alpha_eq(s(x), s(x))


def test_free_vars_examples():
    assert free_vars(lam(x, App(F, x))) == {F}
    assert free_vars(plus(x, y)) == {x, y}
    assert free_vars(lam(x, ZERO)) == set()


def test_term_size_examples():
    assert term_size(ZERO) == 1
    assert term_size(s(s(ZERO))) == 3
    assert term_size(fapp(SIG, "cons", s(ZERO), NIL)) == 4


def test_show_round_trips_binders():
    t = lam(x, lam(y, plus(x, y)))
    assert show(t) == "\\x:nat. \\y:nat. plus(x, y)"
    assert t.body.body.args == (BVar(1, NAT), BVar(0, NAT))


# ------------------------------------------------------------ properties

names = st.sampled_from(["x", "y", "z"])


@st.composite
def nat_terms(draw, depth=3, bound=()):
    """Terms of sort nat over x, y, z, possibly under abstractions applied to arguments."""
    choices = ["var", "zero"]
    if depth > 0:
        choices += ["s", "plus", "beta"]
    kind = draw(st.sampled_from(choices))
    if kind == "var":
        pool = [Var(n, NAT) for n in ("x", "y", "z")] + list(bound)
        return draw(st.sampled_from(pool))
    if kind == "zero":
        return ZERO
    if kind == "s":
        return s(draw(nat_terms(depth - 1, bound)))
    if kind == "plus":
        return plus(draw(nat_terms(depth - 1, bound)), draw(nat_terms(depth - 1, bound)))
    v = Var(draw(names), NAT)
    body = draw(nat_terms(depth - 1, bound + (v,)))
    return App(lam(v, body), draw(nat_terms(depth - 1, bound)))


substitutions = st.dictionaries(st.sampled_from([x, y, z]), nat_terms(depth=2), max_size=3)


@settings(max_examples=200, deadline=None)
@given(nat_terms(), substitutions)
def test_substitution_preserves_type(t, g):
    assert type_of(substitute(t, g), SIG) == type_of(t, SIG)


@settings(max_examples=200, deadline=None)
@given(nat_terms(), substitutions)
def test_free_vars_of_substitution(t, g):
    fv = free_vars(t)
    expected = (fv - set(g)).union(*(free_vars(g[v]) for v in fv & set(g)))
    assert free_vars(substitute(t, g)) == expected


def rename_bound(t, suffix="'"):
    """Rebuild a term with every binder renamed; nameless storage makes this α-equal."""
    if isinstance(t, Abs):
        return Abs(t.var_ty, rename_bound(t.body, suffix), t.name + suffix)
    if isinstance(t, App):
        return App(rename_bound(t.fun, suffix), rename_bound(t.arg, suffix))
    if isinstance(t, FApp):
        return FApp(t.symbol, tuple(rename_bound(a, suffix) for a in t.args), t.ty)
    return t


@settings(max_examples=200, deadline=None)
@given(nat_terms(), substitutions)
def test_substitution_respects_alpha(t, g):
    u = rename_bound(t)
    assert alpha_eq(t, u)
    assert alpha_eq(substitute(t, g), substitute(u, g))


@settings(max_examples=100, deadline=None)
@given(nat_terms(), nat_terms(), nat_terms())
def test_alpha_eq_is_an_equivalence(a, b, c):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)
