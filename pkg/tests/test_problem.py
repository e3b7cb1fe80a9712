from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuple_interp.interp import (
    AddCost,
    BinOp,
    Call,
    CostOf,
    Div,
    Iter,
    Lam,
    Lit,
    Null,
    Proj,
    Ref,
    TupleE,
    show_expr,
)
from tuple_interp.problem import (
    CORPUS,
    DuplicateDecl,
    InterpDecl,
    ProblemSyntaxError,
    ProblemTypeError,
    RApp,
    RCall,
    RLam,
    RName,
    UnknownSymbol,
    build_problem,
    corpus_text,
    load_problem,
    parse_iexpr,
    parse_problem,
    parse_raw_term,
    show_problem,
    show_raw,
)
from tuple_interp.terms import Arrow, Base

HEADER = (
    "sort nat 2; sort list 3; fun 0 : nat; fun s : nat => nat; fun nil : list; fun cons : nat * list => list;"
    "interp 0() = <0, 0>; interp nil() = <0, 0, 0>; interp cons(x, xs) = <x.1 + xs.1, xs.2 + 1, max(x.2, xs.3)>;"
)
S = "interp s(x) = <x.1, x.2 + 1>;"


def test_parse_examples():
    source = parse_problem("sort nat 2; fun s : nat => nat; rule plus(x, z) -> x;")
    assert len(source.decls) == 3
    cons = parse_problem("interp cons(x, xs) = <x.1 + xs.1, xs.2 + 1, max(x.2, xs.3)>;").decls[0]
    assert isinstance(cons, InterpDecl) and cons.params == ("x", "xs")
    assert cons.body == TupleE(
        (
            BinOp("+", Proj(Ref("x"), 1), Proj(Ref("xs"), 1)),
            BinOp("+", Proj(Ref("xs"), 2), Lit(1)),
            BinOp("max", Proj(Ref("x"), 2), Proj(Ref("xs"), 3)),
        )
    )


def test_undeclared_symbol_fails_when_building():
    source = parse_problem("sort nat 2; fun s : nat => nat; rule plus(x, z) -> x;")
    with pytest.raises(UnknownSymbol):
        build_problem(source)


def test_syntax_error_is_positioned():
    text = "sort nat 2; interp s(x) = <x.1, "
    with pytest.raises(ProblemSyntaxError) as info:
        parse_problem(text)
    assert info.value.pos == len(text)
    assert "line 1" in str(info.value)


def test_duplicate_declarations():
    with pytest.raises(DuplicateDecl):
        load_problem("sort nat 2; sort nat 3;")
    with pytest.raises(DuplicateDecl):
        load_problem(HEADER + "fun s : nat => nat;")


def test_type_errors_in_rules_and_interpretations():
    with pytest.raises(ProblemTypeError):
        load_problem(HEADER + S + "fun f : nat => nat; rule f(x) -> nil;")
    with pytest.raises(ProblemTypeError, match="invalid rule"):
        load_problem(HEADER + S + "fun f : nat => nat; interp f(x) = x; rule f(x) -> f(y);")
    with pytest.raises(ProblemTypeError, match="projection"):
        load_problem(HEADER + "interp s(x) = <x.3, 0>;")
    with pytest.raises(ProblemTypeError, match="no interpretation"):
        load_problem(HEADER)


def test_syntax_details():
    assert parse_raw_term("F x y") == RApp(RApp(RName("F"), RName("x")), RName("y"))
    lam = parse_raw_term("\\x:nat => nat. F x")
    assert isinstance(lam, RLam) and lam.ty == Arrow(Base("nat"), Base("nat"))
    assert parse_iexpr("x.1 + y.1 * 2") == BinOp("+", Proj(Ref("x"), 1), BinOp("*", Proj(Ref("y"), 1), Lit(2)))


def test_corpus_parses_builds_and_round_trips():
    for name in CORPUS:
        source = parse_problem(corpus_text(name))
        assert parse_problem(show_problem(source)) == source
        problem = build_problem(source, name)
        assert set(problem.interpretation) == set(problem.signature)


def test_options_reach_the_problem():
    problem = load_problem(HEADER + S + "option eta on; option grid 0,1,2;")
    assert problem.afs.eta and problem.options["grid"] == "0,1,2"


# ----------------------------------------------------------- round trip

names = st.sampled_from(["x", "y", "xs", "F"])
types = st.recursive(st.sampled_from([Base("nat"), Base("list")]), lambda t: st.builds(Arrow, t, t), max_leaves=3)

iexprs = st.recursive(
    st.one_of(st.builds(Lit, st.integers(0, 9)), st.builds(Ref, names), st.builds(Null, types)),
    lambda e: st.one_of(
        st.builds(lambda items: TupleE(tuple(items)), st.lists(e, min_size=1, max_size=3)),
        st.builds(Proj, e, st.integers(1, 3)),
        st.builds(lambda f, args: Call(f, tuple(args)), e, st.lists(e, min_size=1, max_size=2)),
        st.builds(Lam, names, e),
        st.builds(BinOp, st.sampled_from(["+", "*", "max", "min"]), e, e),
        st.builds(Div, e, st.integers(1, 4)),
        st.builds(Iter, e, e, e),
        st.builds(CostOf, e),
        st.builds(AddCost, e, e),
    ),
    max_leaves=12,
)

raw_terms = st.recursive(
    st.builds(RName, names),
    lambda t: st.one_of(
        st.builds(lambda f, args: RCall(f, tuple(args)), st.sampled_from(["f", "cons"]), st.lists(t, min_size=1, max_size=3)),
        st.builds(RLam, names, types, t),
        st.builds(RApp, t, t),
    ),
    max_leaves=10,
)


@settings(max_examples=300, deadline=None)
@given(iexprs)
def test_iexpr_print_parse_round_trip(e):
    assert parse_iexpr(show_expr(e)) == e


@settings(max_examples=300, deadline=None)
@given(raw_terms)
def test_term_print_parse_round_trip(t):
    assert parse_raw_term(show_raw(t)) == t
