from __future__ import annotations

import itertools
import random

import pytest

from conftest import corpus, numeral
from tuple_interp.checker import interpret_term
from tuple_interp.complexity import (
    RCKind,
    ShapeKind,
    bound_shape,
    classify_symbols,
    constructor_bound,
    data_value_bound,
    empirical_rc,
    runtime_class,
)
from tuple_interp.problem import CORPUS, load_problem
from tuple_interp.rewriting import derivation_height, enumerate_data_terms
from tuple_interp.terms import Base


def test_classify_symbols_examples():
    cls = classify_symbols(corpus("rev_append").afs)
    assert cls.constructors == {"0", "s", "nil", "cons"}
    assert cls.analyzed == {"plus", "sum", "rev", "append"}
    cls = classify_symbols(corpus("ab").afs)
    assert cls.constructors == {"b", "e"} and cls.analyzed == {"a"}
    assert "foldl" in classify_symbols(corpus("foldl").afs).higher_order
    assert "map" in classify_symbols(corpus("map").afs).higher_order


def test_bound_shape_examples():
    shape = bound_shape("cons", corpus("rev_append").interpretation)
    assert shape.kind is ShapeKind.ADDITIVE and shape.a == 1
    shape = bound_shape("quot", corpus("quot_minus").interpretation)
    assert shape.kind is ShapeKind.POLYNOMIAL and shape.cost_degree == 2
    shape = bound_shape("mult", corpus("extrec").interpretation)
    assert shape.kind is ShapeKind.POLYNOMIAL and shape.cost_degree == 3
    assert bound_shape("foldl", corpus("foldl").interpretation).kind is ShapeKind.UNKNOWN


def test_linear_but_not_additive_shape():
    problem = load_problem(
        "sort nat 2; fun 0 : nat; fun d : nat => nat;"
        "interp 0() = <0, 0>; interp d(x) = <x.1, 2 * x.2 + 1>;"
    )
    shape = bound_shape("d", problem.interpretation)
    assert shape.kind is ShapeKind.LINEAR and shape.a == 2
    assert runtime_class(problem.afs, problem.interpretation).kind is RCKind.EXPONENTIAL


def test_runtime_class_examples():
    def rc(name):
        return runtime_class(corpus(name).afs, corpus(name).interpretation)

    assert (rc("rev_append").kind, rc("rev_append").degree) == (RCKind.POLYNOMIAL, 2)
    assert rc("ab").kind is RCKind.POLYNOMIAL
    assert (rc("extrec").kind, rc("extrec").degree) == (RCKind.POLYNOMIAL, 3)
    assert rc("map").kind is RCKind.LINEAR


def test_data_value_bound_examples():
    assert data_value_bound(5, 1) == 5
    assert data_value_bound(4, 2, additive=False, max_k=3) == 2**24
    assert data_value_bound(1, 1) == 1


def test_empirical_rc_examples():
    ab = corpus("ab")
    table = empirical_rc(ab.afs, ab.interpretation, 7)
    assert table.rows[-1].n == 7 and table.rows[-1].max_dht == 5
    assert table.consistent
    rev = corpus("rev_append")
    table = empirical_rc(rev.afs, rev.interpretation, 6)
    assert all(r.max_dht <= r.max_cost for r in table.rows) and table.consistent
    first = empirical_rc(ab.afs, ab.interpretation, 1).rows[0]
    assert (first.max_dht, first.max_cost) == (0, 0)


def test_rc_table_csv():
    ab = corpus("ab")
    csv = empirical_rc(ab.afs, ab.interpretation, 3).to_csv()
    assert csv.splitlines()[0] == "n,max_dht,max_cost,predicted"
    assert csv.splitlines()[3].startswith("3,1,1,")


@pytest.mark.parametrize("name", CORPUS)
def test_empirical_chain_holds(name):
    problem = corpus(name)
    assert empirical_rc(problem.afs, problem.interpretation, 6).consistent


# ------------------------------------------------------- data term bounds


def data_values(problem, max_size):
    """Distinct interpretations of data terms per sort and exact size."""
    J, cls = problem.interpretation, classify_symbols(problem.afs)
    sig = problem.signature
    values = {(sort, n): set() for sort in sig.sorts for n in range(max_size + 1)}
    for n in range(1, max_size + 1):
        for name in sorted(cls.constructors):
            decl = sig[name]
            k = len(decl.inputs)
            for sizes in itertools.product(range(1, n), repeat=k):
                if sum(sizes) != n - 1:
                    continue
                pools = [values[(ty.name, m)] for ty, m in zip(decl.inputs, sizes)]
                for args in itertools.product(*pools):
                    values[(decl.output.name, n)].add(J[name](*args))
            if k == 0 and n == 1:
                values[(decl.output.name, 1)].add(J[name]())
    return values


def test_data_values_agree_with_interpret_term():
    for name in ("rev_append", "deriv"):
        problem = corpus(name)
        table = data_values(problem, 5)
        for sort in problem.signature.sorts:
            for n in range(1, 6):
                terms = enumerate_data_terms(problem.afs, Base(sort), n)
                assert {interpret_term(t, problem.interpretation) for t in terms} == table[(sort, n)]


@pytest.mark.parametrize("name", CORPUS)
def test_data_terms_are_linearly_bounded(name):
    problem = corpus(name)
    bound = constructor_bound(problem.afs, problem.interpretation)
    assert bound is not None and bound[1]
    a = bound[0]
    for (sort, n), vals in data_values(problem, 8).items():
        for v in vals:
            assert max(v) <= data_value_bound(n, a)


@pytest.mark.parametrize("name", CORPUS)
def test_bound_shapes_hold_on_samples(name):
    problem = corpus(name)
    J = problem.interpretation
    rng = random.Random(name)
    cls = classify_symbols(problem.afs)
    for symbol in sorted(cls.constructors | cls.analyzed):
        shape = bound_shape(symbol, J)
        if not shape.linearly_bounded:
            continue
        doms = J[symbol].input_doms
        linear = max(shape.a, 1)
        for _ in range(1000):
            args = [tuple(rng.randint(0, 16) for _ in range(d.size)) for d in doms]
            out = J[symbol](*args)
            total_in = sum(map(sum, args))
            if shape.additive:
                assert sum(out) <= shape.a + total_in
            assert all(c <= linear * (1 + total_in) for c in out)


def test_linear_classification_matches_observed_runtime():
    for name in CORPUS:
        problem = corpus(name)
        if runtime_class(problem.afs, problem.interpretation).kind is not RCKind.LINEAR:
            continue
        rows = empirical_rc(problem.afs, problem.interpretation, 6).rows
        slopes = {b.predicted - a.predicted for a, b in zip(rows, rows[1:])}
        assert len(slopes) == 1
        c = max(rows[0].predicted, *slopes)
        assert all(r.max_dht <= c * r.n for r in rows)


def test_extrec_basic_terms_match_oracle_at_small_sizes():
    extrec = corpus("extrec")
    for n, m in [(0, 0), (1, 2), (2, 2)]:
        t = extrec.term(f"mult({numeral(n)}, {numeral(m)})")
        assert derivation_height(t, extrec.afs) <= interpret_term(t, extrec.interpretation)[0]
