"""Runtime complexity from interpretation shapes, and its empirical check.

Constructor interpretations bounded additively keep data values linear in
term size; the cost components of the defined first-order symbols then bound
the runtime of basic terms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import TupleDom
from .checker import interpret_term
from .interp import Interpretation
from .polynomial import MaxMin, OutsideFragment, Poly
from .rewriting import AFS, DhtOracle, data_constructors, enumerate_basic_terms
from .terms import term_size


@dataclass(frozen=True)
class SymbolClass:
    constructors: frozenset[str]
    analyzed: frozenset[str]
    higher_order: frozenset[str]


def classify_symbols(afs: AFS) -> SymbolClass:
    constructors = data_constructors(afs)
    analyzed, higher = set(), set()
    for name, decl in afs.signature.items():
        if name in constructors:
            continue
        (analyzed if decl.first_order else higher).add(name)
    return SymbolClass(constructors, frozenset(analyzed), frozenset(higher))


# ------------------------------------------------------------ shapes


class ShapeKind(enum.Enum):
    ADDITIVE = "additive"
    LINEAR = "linearly bounded"
    POLYNOMIAL = "polynomial cost"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BoundShape:
    """Least constants found for the bounds of one interpretation.

    ``a`` is the additive constant for ADDITIVE and the linear factor for
    LINEAR shapes; ``cost_degree`` is the degree of the cost upper bound.
    """

    kind: ShapeKind
    a: int | None = None
    cost_degree: int | None = None
    cost_bound: Poly | None = None

    @property
    def additive(self) -> bool:
        return self.kind is ShapeKind.ADDITIVE

    @property
    def linearly_bounded(self) -> bool:
        return self.kind in (ShapeKind.ADDITIVE, ShapeKind.LINEAR)

    @property
    def polynomial(self) -> bool:
        return self.kind is not ShapeKind.UNKNOWN

    def __str__(self) -> str:
        if self.kind is ShapeKind.UNKNOWN:
            return "unknown"
        text = self.kind.value
        if self.a is not None:
            text += f" (a={self.a})"
        return text + f", cost degree {self.cost_degree}"


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def symbolic_output(symbol: str, J: Interpretation) -> tuple[MaxMin, ...]:
    """J_f over component variables ``p<i>.<j>``; raises OutsideFragment."""
    compiled = J[symbol]
    args = []
    for i, dom in enumerate(compiled.input_doms, 1):
        if not isinstance(dom, TupleDom):
            raise OutsideFragment(f"{symbol} has a higher-order input")
        args.append(tuple(MaxMin.var(f"p{i}.{j}") for j in range(1, dom.size + 1)))
    out = compiled(*args)
    if not isinstance(out, tuple):
        raise OutsideFragment(f"{symbol} has a higher-order output")
    return tuple(MaxMin.lift(c) for c in out)


def bound_shape(symbol: str, J: Interpretation) -> BoundShape:
    """Classify J_f by sound polynomial upper bounds (max ≤ sum, min ≤ a branch)."""
    try:
        out = symbolic_output(symbol, J)
    except OutsideFragment:
        return BoundShape(ShapeKind.UNKNOWN)
    uppers = [c.upper_poly() for c in out]
    cost = uppers[0]
    total = sum(uppers, Poly())
    if total.degree <= 1:
        linear_terms = {m: c for m, c in total.terms.items() if m}
        if all(c <= 1 for c in linear_terms.values()):
            return BoundShape(ShapeKind.ADDITIVE, _ceil(total.constant), cost.degree, cost)
    if all(u.degree <= 1 for u in uppers):
        a = max(_ceil(c) for u in uppers for c in u.terms.values()) if total.terms else 0
        return BoundShape(ShapeKind.LINEAR, max(a, 1), cost.degree, cost)
    return BoundShape(ShapeKind.POLYNOMIAL, None, cost.degree, cost)


# --------------------------------------------------------- classification


class RCKind(enum.Enum):
    LINEAR = "linear"
    POLYNOMIAL = "polynomial"
    EXPONENTIAL = "exponential"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RCClass:
    kind: RCKind
    degree: int | None = None

    def __str__(self) -> str:
        if self.kind is RCKind.POLYNOMIAL:
            return f"polynomial (degree estimate {self.degree})"
        return self.kind.value


def shapes(afs: AFS, J: Interpretation, symbols: Iterable[str] | None = None) -> dict[str, BoundShape]:
    if symbols is None:
        cls = classify_symbols(afs)
        symbols = sorted(cls.constructors | cls.analyzed)
    return {name: bound_shape(name, J) for name in symbols}


def runtime_class(afs: AFS, J: Interpretation) -> RCClass:
    """Linear, polynomial or exponential by the shapes of constructors and defined symbols."""
    cls = classify_symbols(afs)
    found = shapes(afs, J)
    cons = [found[c] for c in cls.constructors]
    defined = [found[f] for f in cls.analyzed]
    everything = cons + defined
    if all(s.additive for s in everything):
        return RCClass(RCKind.LINEAR, 1)
    if all(s.additive for s in cons) and all(s.polynomial for s in defined):
        return RCClass(RCKind.POLYNOMIAL, max((s.cost_degree for s in defined), default=0))
    if all(s.linearly_bounded for s in everything):
        return RCClass(RCKind.EXPONENTIAL)
    return RCClass(RCKind.UNKNOWN)


def data_value_bound(n: int, a: int, additive: bool = True, max_k: int = 1) -> int:
    """Bound on every component of a data term of size ≤ n.

    Additive constructors give a·n; linearly bounded ones 2^(a·k·n) with
    k = max(2, max_k).
    """
    if additive:
        return a * n
    return 2 ** (a * max(2, max_k) * n)


def constructor_bound(afs: AFS, J: Interpretation) -> tuple[int, bool] | None:
    """(a, additive) for the constructors as a whole, or None if unbounded."""
    cls = classify_symbols(afs)
    cons = [bound_shape(c, J) for c in sorted(cls.constructors)]
    if all(s.additive for s in cons):
        return max((s.a for s in cons), default=0), True
    if all(s.linearly_bounded for s in cons):
        return max((s.a for s in cons), default=1), False
    return None


# ------------------------------------------------------------- empirics


@dataclass(frozen=True)
class RCRow:
    n: int
    max_dht: int
    max_cost: int
    predicted: int | None

    @property
    def consistent(self) -> bool:
        if self.max_dht > self.max_cost:
            return False
        return self.predicted is None or self.max_cost <= self.predicted


@dataclass(frozen=True)
class RCTable:
    rows: tuple[RCRow, ...]

    @property
    def consistent(self) -> bool:
        return all(r.consistent for r in self.rows)

    def to_csv(self) -> str:
        lines = ["n,max_dht,max_cost,predicted"]
        for r in self.rows:
            lines.append(f"{r.n},{r.max_dht},{r.max_cost},{'' if r.predicted is None else r.predicted}")
        return "\n".join(lines) + "\n"


def predicted_cost(n: int, afs: AFS, J: Interpretation) -> int | None:
    """Upper bound on ⟦t⟧₁ for basic terms of size ≤ n, None if unavailable."""
    bound = constructor_bound(afs, J)
    if bound is None:
        return None
    a, additive = bound
    value = data_value_bound(n, a, additive, J.spec.max_size)
    best = 0
    for name in sorted(classify_symbols(afs).analyzed):
        shape = bound_shape(name, J)
        if shape.cost_bound is None:
            return None
        best = max(best, _ceil(shape.cost_bound.substitute_all(value)))
    return best


def empirical_rc(afs: AFS, J: Interpretation, max_size: int, fuel: int = 1_000_000) -> RCTable:
    """Rows n = 1..max_size over basic terms of size ≤ n; ``fuel`` bounds the whole search."""
    oracle = DhtOracle(afs, fuel)
    terms = enumerate_basic_terms(afs, max_size)
    rows = []
    max_dht = max_cost = 0
    index = 0
    for n in range(1, max_size + 1):
        while index < len(terms) and term_size(terms[index]) <= n:
            t = terms[index]
            max_dht = max(max_dht, oracle(t))
            max_cost = max(max_cost, interpret_term(t, J)[0])
            index += 1
        rows.append(RCRow(n, max_dht, max_cost, predicted_cost(n, afs, J)))
    return RCTable(tuple(rows))


__all__ = [
    "BoundShape",
    "RCClass",
    "RCKind",
    "RCRow",
    "RCTable",
    "ShapeKind",
    "SymbolClass",
    "bound_shape",
    "classify_symbols",
    "constructor_bound",
    "data_value_bound",
    "empirical_rc",
    "predicted_cost",
    "runtime_class",
    "shapes",
    "symbolic_output",
]
