from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus
from tuple_interp.algebra import (
    FunDom,
    ProbeSet,
    TupleDom,
    TupleSpec,
    add_cost,
    base_geq,
    base_gt,
    compare_values,
    null_value,
)
from tuple_interp.interp import (
    ArityMismatch,
    BadProjection,
    IterStepNotEndo,
    NonNaturalCount,
    analyze_definition,
    analyze_monotonicity,
    check_strongly_monotonic,
    eval_expr,
    typecheck_expr,
)
from tuple_interp.problem import CORPUS, load_problem, parse_iexpr
from tuple_interp.verdicts import Status

SPEC = TupleSpec({"nat": 2, "list": 3})
N2, L3 = TupleDom(2), TupleDom(3)
PROBES = ProbeSet((0, 1, 2, 3))
CONS = "<x.1 + xs.1, xs.2 + 1, max(x.2, xs.3)>"


def test_typecheck_examples():
    assert typecheck_expr(parse_iexpr(CONS), {"x": N2, "xs": L3}, SPEC) == L3
    with pytest.raises(BadProjection):
        typecheck_expr(parse_iexpr("x.3"), {"x": N2}, SPEC)
    helper = "iter(xs.2, \\z. <F(z, <xs.1, xs.3>).1, max(z.2, F(z, <xs.1, xs.3>).2)>, base)"
    ctx = {"xs": L3, "F": FunDom(N2, FunDom(N2, N2)), "base": N2}
    assert typecheck_expr(parse_iexpr(helper), ctx, SPEC) == N2


def test_typecheck_errors():
    with pytest.raises(ArityMismatch):
        typecheck_expr(parse_iexpr("F(x, x)"), {"F": FunDom(N2, N2), "x": N2}, SPEC)
    with pytest.raises(IterStepNotEndo):
        typecheck_expr(parse_iexpr("iter(2, G, <0, 0>)"), {"G": FunDom(N2, L3)}, SPEC)
    with pytest.raises(NonNaturalCount):
        typecheck_expr(parse_iexpr("iter(x, \\d. d, <0, 0>)"), {"x": N2}, SPEC)


def test_eval_examples():
    assert eval_expr(parse_iexpr(CONS), {"x": (0, 1), "xs": (0, 0, 0)}, SPEC) == (0, 1, 1)
    assert eval_expr(parse_iexpr("iter(2, \\d. addcost(1, d), <0, 0>)"), {}, SPEC) == (2, 0)
    assert eval_expr(parse_iexpr("7 / 2"), {}, SPEC) == 3


def test_map_nil_at_null_function():
    problem = corpus("map")
    J = problem.interpretation
    nil = J["nil"]()
    assert J["map"](null_value(FunDom(N2, N2)), nil) == (1, 0, 0)


def test_analyzer_examples():
    assert analyze_monotonicity(parse_iexpr("x"), ["x"], {"x": N2}).strict_in == {"x"}
    report = analyze_monotonicity(parse_iexpr("5"), [], {})
    assert report.weakly_monotonic and report.strict_in == set()
    mapdef = corpus("map").interpretation["map"]
    report = analyze_definition(mapdef.definition, mapdef.flat_doms)
    assert report.weakly_monotonic and report.strict_indices == {0, 1}


def test_analyzer_operator_rules():
    ctx = {"x": N2, "y": N2}
    assert analyze_monotonicity(parse_iexpr("x.1 + y.1"), ["x", "y"], ctx).strict_in == {"x", "y"}
    assert analyze_monotonicity(parse_iexpr("x.1 * y.1"), ["x", "y"], ctx).strict_in == set()
    assert analyze_monotonicity(parse_iexpr("max(x.1, y.1)"), ["x", "y"], ctx).strict_in == set()
    assert analyze_monotonicity(parse_iexpr("<x.2, x.1>"), ["x"], ctx).strict_in == set()
    assert analyze_monotonicity(parse_iexpr("<x.1, 0>"), ["x"], ctx).strict_in == {"x"}


def test_check_strongly_monotonic_examples():
    assert check_strongly_monotonic("append", corpus("rev_append").interpretation, PROBES)[0].status is Status.CERTIFIED
    status = check_strongly_monotonic("foldl", corpus("foldl").interpretation, PROBES)[0].status
    assert status in (Status.CERTIFIED, Status.VALIDATED)
    bad = load_problem("sort nat 2; fun f : nat => nat; interp f(x) = <0, x.1>;")
    verdict, _ = check_strongly_monotonic("f", bad.interpretation, PROBES)
    assert verdict.status is Status.REFUTED
    assert verdict.witness.smaller == ((0, 0),) and verdict.witness.larger == ((1, 0),)


def test_every_corpus_interpretation_is_strongly_monotonic():
    for name in CORPUS:
        J = corpus(name).interpretation
        for symbol in J:
            assert check_strongly_monotonic(symbol, J, PROBES)[0].status.ok, (name, symbol)


# ------------------------------------------------------------ properties


def _strict_cases():
    for name in CORPUS:
        J = corpus(name).interpretation
        for symbol, compiled in sorted(J.items()):
            report = analyze_definition(compiled.definition, compiled.flat_doms)
            if report.weakly_monotonic:
                yield name, symbol, report


STRICT_CASES = list(_strict_cases())


@pytest.mark.parametrize("name,symbol,report", STRICT_CASES, ids=[f"{n}-{s}" for n, s, _ in STRICT_CASES])
def test_analyzer_sound_on_probes(name, symbol, report):
    compiled = corpus(name).interpretation[symbol]
    doms = compiled.flat_doms
    probes = ProbeSet((0, 1, 2), cap=8)
    for valuation in probes.argument_tuples(doms, cap=64):
        base = compiled.apply_flat(valuation)
        for i, param in enumerate(report.params):
            bigger = list(valuation)
            bigger[i] = add_cost(1, valuation[i])
            result = compiled.apply_flat(bigger)
            if param in report.strict_in:
                assert base_gt(result, base)
            else:
                assert base_geq(result, base)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_lambda_application_is_compositional(a, b, c):
    applied = parse_iexpr("(\\d. <d.1 + y.2, d.2 * y.1>)(x)")
    body = parse_iexpr("<d.1 + y.2, d.2 * y.1>")
    env = {"x": (a, b), "y": (c, a)}
    assert eval_expr(applied, env, SPEC) == eval_expr(body, {"d": (a, b), "y": (c, a)}, SPEC)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4), st.integers(0, 2), st.data())
def test_iter_is_monotone_in_count_and_parameters(count, extra, data):
    expr = parse_iexpr("iter(xs.2, \\a. <F(a, <xs.1, xs.3>).1, max(a.2, F(a, <xs.1, xs.3>).2)>, z)")
    fdom = FunDom(N2, FunDom(N2, N2))
    ctx = {"xs": L3, "F": fdom, "z": N2}
    F = data.draw(st.sampled_from(PROBES(fdom)))
    z = data.draw(st.sampled_from(PROBES(N2)))
    xs = (data.draw(st.integers(0, 3)), count, data.draw(st.integers(0, 3)))
    small = eval_expr(expr, {"xs": xs, "F": F, "z": z}, SPEC, ctx)
    larger_count = eval_expr(expr, {"xs": (xs[0], count + extra, xs[2]), "F": F, "z": z}, SPEC, ctx)
    larger_base = eval_expr(expr, {"xs": xs, "F": F, "z": add_cost(extra, z)}, SPEC, ctx)
    larger_f = eval_expr(expr, {"xs": xs, "F": add_cost(extra, F), "z": z}, SPEC, ctx)
    for other in (larger_count, larger_base, larger_f):
        assert compare_values(other, small, N2).geq


@given(st.integers(0, 10_000))
def test_rev_triangular_term_is_exact(length):
    J = corpus("rev_append").interpretation
    cost = J["rev"]((0, length, 0))[0]
    assert 2 * (cost - length - 1) == length * (length + 1)
