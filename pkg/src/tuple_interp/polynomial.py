"""Multivariate polynomials over naturals and their max/min closure.

``MaxMin`` keeps a max of mins of polynomials.  Addition and multiplication
distribute over both lattice operations because every quantity is a natural
number, so the normal form is closed under all interpretation operators except
iteration.
"""

from __future__ import annotations

import itertools
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Monomial = tuple[tuple[str, int], ...]


class OutsideFragment(Exception):
    """The expression has no max/min-polynomial normal form."""


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}
        self._hash = None

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return Poly(out)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Monomial, Fraction] = {}
        for (ma, ca), (mb, cb) in itertools.product(self.terms.items(), other.terms.items()):
            m = _mono_mul(ma, mb)
            out[m] = out.get(m, 0) + ca * cb
        return Poly(out)

    def scale(self, factor) -> "Poly":
        return Poly({m: c * factor for m, c in self.terms.items()})

    @property
    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    @property
    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def var_degree(self, var: str) -> int:
        return max((e for m in self.terms for v, e in m if v == var), default=0)

    def nonnegative_coefficients(self) -> bool:
        return all(c >= 0 for c in self.terms.values())

    def dominates(self, other: "Poly", surplus: int = 0) -> bool:
        """Coefficientwise ``self ≥ other + surplus``; sound for natural arguments."""
        return (self - other - Poly.const(surplus)).nonnegative_coefficients()

    def evaluate(self, env: Mapping[str, int]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for var, e in m:
                term *= env[var] ** e
            total += term
        return total

    def is_integer_valued(self) -> bool:
        """Integer at every natural point; checking the box {0..deg_v} suffices."""
        if all(c.denominator == 1 for c in self.terms.values()):
            return True
        names = sorted(self.variables())
        ranges = [range(self.var_degree(v) + 1) for v in names]
        for point in itertools.product(*ranges):
            if self.evaluate(dict(zip(names, point))).denominator != 1:
                return False
        return True

    def compose(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Replace variables by polynomials; unmapped variables stay."""
        total = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for var, e in m:
                base = mapping.get(var)
                if base is None:
                    base = Poly.var(var)
                for _ in range(e):
                    term = term * base
            total = total + term
        return total

    def single_variable(self) -> str | None:
        """The variable if this polynomial is exactly one variable."""
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            if c == 1 and len(m) == 1 and m[0][1] == 1:
                return m[0][0]
        return None

    def substitute_all(self, value) -> Fraction:
        """Evaluate with every variable set to ``value``."""
        return self.evaluate({v: value for v in self.variables()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0])):
            factors = [v if e == 1 else f"{v}^{e}" for v, e in m]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


def _prune_min(polys: Iterable[Poly]) -> frozenset[Poly]:
    polys = set(polys)
    keep = {p for p in polys if not any(q is not p and q != p and p.dominates(q) for q in polys)}
    return frozenset(keep or polys)


class MaxMin:
    """max over min-terms, each a min over polynomials."""

    __slots__ = ("branches",)

    def __init__(self, branches: Iterable[frozenset[Poly]]):
        branches = {_prune_min(b) for b in branches}
        self.branches = frozenset(
            b
            for b in branches
            if not any(o != b and _min_below(b, o) for o in branches)
        )

    @classmethod
    def lift(cls, x) -> "MaxMin":
        if isinstance(x, MaxMin):
            return x
        if isinstance(x, Poly):
            return cls([frozenset([x])])
        if isinstance(x, int):
            return cls([frozenset([Poly.const(x)])])
        raise OutsideFragment(f"cannot normalise {x!r}")

    @classmethod
    def var(cls, name: str) -> "MaxMin":
        return cls.lift(Poly.var(name))

    def _combine(self, other, op) -> "MaxMin":
        other = MaxMin.lift(other)
        return MaxMin(
            frozenset(op(p, q) for p, q in itertools.product(a, b))
            for a, b in itertools.product(self.branches, other.branches)
        )

    def __add__(self, other):
        return self._combine(other, Poly.__add__)

    __radd__ = __add__

    def __mul__(self, other):
        return self._combine(other, Poly.__mul__)

    __rmul__ = __mul__

    def max(self, other) -> "MaxMin":
        return MaxMin(self.branches | MaxMin.lift(other).branches)

    def min(self, other) -> "MaxMin":
        other = MaxMin.lift(other)
        return MaxMin(a | b for a, b in itertools.product(self.branches, other.branches))

    def __floordiv__(self, divisor: int) -> "MaxMin":
        out = []
        for branch in self.branches:
            polys = []
            for p in branch:
                q = p.scale(Fraction(1, divisor))
                if not q.is_integer_valued():
                    raise OutsideFragment(f"({p}) / {divisor} is not integer-valued")
                polys.append(q)
            out.append(frozenset(polys))
        return MaxMin(out)

    def __eq__(self, other):
        return isinstance(other, MaxMin) and self.branches == other.branches

    def __hash__(self):
        return hash(self.branches)

    def geq(self, other: "MaxMin", surplus: int = 0) -> bool:
        """Sound sufficient test for ``self ≥ other + surplus`` on all naturals."""
        other = MaxMin.lift(other)
        for rbranch in other.branches:
            if not any(
                all(p.dominates(q, surplus) for p in lbranch)
                for q in rbranch
                for lbranch in self.branches
            ):
                return False
        return True

    def upper_poly(self) -> Poly:
        """A polynomial bounding the value from above: max ≤ sum, min ≤ any branch."""
        total = Poly()
        for branch in self.branches:
            total = total + min(branch, key=lambda p: (p.degree, sum(p.terms.values()), repr(p)))
        return total

    def evaluate(self, env: Mapping[str, int]) -> Fraction:
        return max(min(p.evaluate(env) for p in b) for b in self.branches)

    def compose(self, mapping: Mapping[str, Poly]) -> "MaxMin":
        return MaxMin(frozenset(p.compose(mapping) for p in b) for b in self.branches)

    def single_variable(self) -> str | None:
        if len(self.branches) == 1:
            (branch,) = self.branches
            if len(branch) == 1:
                (p,) = branch
                return p.single_variable()
        return None

    def __repr__(self) -> str:
        def show_branch(b):
            items = sorted(map(repr, b))
            return items[0] if len(items) == 1 else "min(" + ", ".join(items) + ")"

        items = sorted(show_branch(b) for b in self.branches)
        return items[0] if len(items) == 1 else "max(" + ", ".join(items) + ")"


def _min_below(a: frozenset[Poly], b: frozenset[Poly]) -> bool:
    """min(a) ≤ min(b) for sure: every member of b dominates some member of a."""
    return all(any(q.dominates(p) for p in a) for q in b)


_recorder: ContextVar[list | None] = ContextVar("lattice_recorder", default=None)


@contextmanager
def record_lattice_args() -> Iterator[list[tuple["MaxMin", "MaxMin"]]]:
    """Collect the symbolic operand pairs of every max/min evaluated inside."""
    pairs: list[tuple[MaxMin, MaxMin]] = []
    token = _recorder.set(pairs)
    try:
        yield pairs
    finally:
        _recorder.reset(token)


def _record(a, b) -> None:
    pairs = _recorder.get()
    if pairs is not None:
        pairs.append((MaxMin.lift(a), MaxMin.lift(b)))


def nat_max(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a if a >= b else b
    _record(a, b)
    return MaxMin.lift(a).max(b)


def nat_min(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a if a <= b else b
    _record(a, b)
    return MaxMin.lift(a).min(b)
