"""Tuple values, strongly monotonic functionals and their orderings.

A value of a sort with K components is a Python tuple of K naturals.  A value
of an arrow type is a :class:`Functional`, an immutable wrapper around a Python
callable that remembers its argument and result domains.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence, Union

from .terms import Base, SimpleType


class AlgebraError(Exception):
    pass


class LengthMismatch(AlgebraError):
    pass


class DomainMismatch(AlgebraError):
    pass


# --------------------------------------------------------------- domains


@dataclass(frozen=True)
class NatDom:
    """Plain naturals; only used inside interpretation expressions."""

    def __str__(self) -> str:
        return "N"


@dataclass(frozen=True)
class TupleDom:
    size: int

    def __str__(self) -> str:
        return f"N^{self.size}"


@dataclass(frozen=True)
class FunDom:
    arg: "Domain"
    res: "Domain"

    def __str__(self) -> str:
        left = f"({self.arg})" if isinstance(self.arg, FunDom) else str(self.arg)
        return f"{left} -> {self.res}"


Domain = Union[NatDom, TupleDom, FunDom]
NAT = NatDom()


@dataclass(frozen=True)
class TupleSpec:
    """Number of tuple components K(ι) for each sort."""

    sizes: Mapping[str, int]

    def __post_init__(self):
        for sort, k in self.sizes.items():
            if k < 1:
                raise AlgebraError(f"sort {sort} needs at least one component")

    def __hash__(self):
        return hash(tuple(sorted(self.sizes.items())))

    def domain(self, ty: SimpleType) -> Domain:
        if isinstance(ty, Base):
            return TupleDom(self.sizes[ty.name])
        return FunDom(self.domain(ty.left), self.domain(ty.right))

    @property
    def max_size(self) -> int:
        return max(self.sizes.values())


def domain_args(dom: Domain) -> tuple[list[Domain], Domain]:
    args = []
    while isinstance(dom, FunDom):
        args.append(dom.arg)
        dom = dom.res
    return args, dom


def domain_order(dom: Domain) -> int:
    if isinstance(dom, FunDom):
        return max(domain_order(dom.arg) + 1, domain_order(dom.res))
    return 0


# ---------------------------------------------------------------- values


@dataclass(frozen=True, eq=False)
class Functional:
    """A function value of domain ``arg -> res``; ``label`` is for display."""

    arg: Domain
    res: Domain
    fn: Callable[["Value"], "Value"] = field(repr=False)
    label: str = "<fun>"

    @property
    def domain(self) -> FunDom:
        return FunDom(self.arg, self.res)

    def __call__(self, value: "Value") -> "Value":
        return self.fn(value)

    def __repr__(self) -> str:
        return self.label

    __str__ = __repr__


Value = Union[int, tuple, Functional]


def domain_of(value: Value) -> Domain:
    if isinstance(value, Functional):
        return value.domain
    if isinstance(value, tuple):
        return TupleDom(len(value))
    return NAT


def apply_all(value: Value, args: Sequence[Value]) -> Value:
    for a in args:
        value = value(a)
    return value


def show_value(value: Value) -> str:
    if isinstance(value, tuple):
        return "<" + ", ".join(map(str, value)) + ">"
    return str(value)


# --------------------------------------------- null / costof / addcost


def null_value(dom: Domain) -> Value:
    if isinstance(dom, TupleDom):
        return (0,) * dom.size
    if isinstance(dom, NatDom):
        return 0
    res_null = null_value(dom.res)
    return Functional(dom.arg, dom.res, lambda d: add_cost(cost_of(d), res_null), f"null({dom})")


def cost_of(x: Value) -> int:
    while isinstance(x, Functional):
        x = x(null_value(x.arg))
    if isinstance(x, tuple):
        return x[0]
    return x


def add_cost(n: int, x: Value) -> Value:
    if n == 0:
        return x
    if isinstance(x, tuple):
        return (x[0] + n,) + x[1:]
    if isinstance(x, Functional):
        return Functional(x.arg, x.res, lambda d: add_cost(n, x(d)), f"addcost({n}, {x.label})")
    return x + n


def size_of(x: Value) -> int:
    """Sum of the non-cost components of ``x`` (of ``x`` applied to nulls at arrows)."""
    while isinstance(x, Functional):
        x = x(null_value(x.arg))
    if isinstance(x, tuple):
        return sum(x[1:])
    return 0


def boost(x: Value, cost: int, size: int) -> Value:
    """Add ``cost`` to the cost component and ``size`` to every other component."""
    if isinstance(x, tuple):
        return (x[0] + cost,) + tuple(v + size for v in x[1:])
    return Functional(x.arg, x.res, lambda d: boost(x(d), cost, size), f"boost({x.label}, {cost}, {size})")


class Mono(enum.Enum):
    STRONG = "strong"
    CONSTANT = "constant"


def phi(f: Callable[[Value], Value], arg: Domain, res: Domain, flag: Mono, label: str = "phi") -> Functional:
    """Turn a strongly monotonic or constant function into a strongly monotonic functional."""
    if flag is Mono.STRONG:
        return Functional(arg, res, lambda d: add_cost(1, f(d)), label)
    return Functional(arg, res, lambda d: add_cost(cost_of(d) + 1, f(d)), label)


def constant_functional(arg: Domain, value: Value, label: str | None = None) -> Functional:
    return Functional(arg, domain_of(value), lambda d: value, label or f"const({show_value(value)})")


# ------------------------------------------------------------- orderings


def _same_length(x: tuple, y: tuple) -> None:
    if len(x) != len(y):
        raise LengthMismatch(f"cannot compare tuples of length {len(x)} and {len(y)}")


def base_geq(x: tuple, y: tuple) -> bool:
    _same_length(x, y)
    return all(a >= b for a, b in zip(x, y))


def base_gt(x: tuple, y: tuple) -> bool:
    return base_geq(x, y) and x[0] > y[0]


class Order(enum.Enum):
    GT = "gt"
    GEQ_ONLY = "geq"
    REFUTED = "refuted"


@dataclass(frozen=True)
class Comparison:
    order: Order
    witness: tuple = ()  # argument tuple at which the weakest result was observed
    left: Value | None = None
    right: Value | None = None
    probes: int = 0

    @property
    def gt(self) -> bool:
        return self.order is Order.GT

    @property
    def geq(self) -> bool:
        return self.order is not Order.REFUTED


def compare_values(x: Value, y: Value, dom: Domain, probes: "ProbeSet | None" = None) -> Comparison:
    """Compare at ``dom``: exact at sorts, pointwise on probe arguments at arrows."""
    if isinstance(dom, NatDom):
        order = Order.GT if x > y else Order.GEQ_ONLY if x >= y else Order.REFUTED
        return Comparison(order, (), x, y, 1)
    if isinstance(dom, TupleDom):
        if not isinstance(x, tuple) or not isinstance(y, tuple):
            raise DomainMismatch("expected tuple values")
        order = Order.GT if base_gt(x, y) else Order.GEQ_ONLY if base_geq(x, y) else Order.REFUTED
        return Comparison(order, (), x, y, 1)
    if probes is None:
        raise AlgebraError("arrow-type comparison needs probes")
    args, _ = domain_args(dom)
    result = Order.GT
    weakest = None
    count = 0
    for combo in probes.argument_tuples(args):
        lx, ry = apply_all(x, combo), apply_all(y, combo)
        count += 1
        if base_gt(lx, ry):
            continue
        if base_geq(lx, ry):
            if result is Order.GT:
                result, weakest = Order.GEQ_ONLY, (combo, lx, ry)
            continue
        return Comparison(Order.REFUTED, combo, lx, ry, count)
    if weakest is None:
        return Comparison(result, (), None, None, count)
    return Comparison(result, weakest[0], weakest[1], weakest[2], count)


def compare_at_type(x: Value, y: Value, ty: SimpleType, spec: TupleSpec, probes: "ProbeSet") -> Comparison:
    return compare_values(x, y, spec.domain(ty), probes)


# ---------------------------------------------------------------- probes


def affine_probe(arg: Domain, target: Value, a: int, b: int, c: int, k: int) -> Functional:
    """d ↦ boost(target, a·costof(d) + b·size(d) + k, c·size(d)), strongly monotonic for a ≥ 1."""

    def fn(d):
        s = size_of(d)
        return boost(target, a * cost_of(d) + b * s + k, c * s)

    return Functional(arg, domain_of(target), fn, f"aff[{a},{b},{c},{k}]({show_value(target) if not isinstance(target, Functional) else target.label})")


def product_probe(arg: Domain, target: Value, k: int) -> Functional:
    """d ↦ boost(target, costof(d)·(size(d)+1) + k, size(d)²), a superlinear member."""

    def fn(d):
        s = size_of(d)
        return boost(target, cost_of(d) * (s + 1) + k, s * s)

    return Functional(arg, domain_of(target), fn, f"prod[{k}]({show_value(target) if not isinstance(target, Functional) else target.label})")


class ProbeSet:
    """Finite stand-ins for the elements of each domain.

    Sorts get every tuple over ``grid`` (a seeded subsample above ``cap``).
    Arrow domains get a fixed family: the null functional, constant cost
    shifts of it, affine functionals over a few result probes and a
    superlinear member; again subsampled above ``cap``.
    """

    def __init__(self, grid: Sequence[int] = (0, 1, 2, 3), cap: int = 64, seed: int = 0):
        if not grid:
            raise AlgebraError("probe grid must be nonempty")
        self.grid = tuple(sorted(set(grid)))
        self.cap = cap
        self.seed = seed
        self._cache: dict[Domain, tuple[Value, ...]] = {}

    def __call__(self, dom: Domain) -> tuple[Value, ...]:
        hit = self._cache.get(dom)
        if hit is None:
            hit = self._build(dom)
            self._cache[dom] = hit
        return hit

    def _rng(self, dom: Domain) -> random.Random:
        return random.Random(f"{self.seed}:{dom}")

    def _subsample(self, values: list, dom: Domain) -> tuple:
        if len(values) <= self.cap:
            return tuple(values)
        rest = self._rng(dom).sample(range(1, len(values)), self.cap - 1)
        return tuple(values[i] for i in [0] + sorted(rest))

    def _build(self, dom: Domain) -> tuple[Value, ...]:
        if isinstance(dom, NatDom):
            return self.grid
        if isinstance(dom, TupleDom):
            return self._subsample(list(itertools.product(self.grid, repeat=dom.size)), dom)
        null = null_value(dom)
        family: list[Value] = [null]
        family += [add_cost(k, null) for k in self.grid if k > 0]
        targets = self._targets(dom.res)
        top = max(self.grid)
        for target in targets:
            family.append(affine_probe(dom.arg, target, 1, 0, 0, 0))
            family.append(affine_probe(dom.arg, target, 1, 1, 1, 0))
            family.append(affine_probe(dom.arg, target, 2, 0, 1, 1))
            family.append(affine_probe(dom.arg, target, 1, top, top, top))
            family.append(product_probe(dom.arg, target, 0))
        return self._subsample(family, dom)

    def _targets(self, dom: Domain) -> list[Value]:
        """A handful of result values the affine family is built around."""
        values = self(dom)
        if len(values) <= 4:
            return list(values)
        step = (len(values) - 1) / 3
        return [values[round(i * step)] for i in range(4)]

    def argument_tuples(self, doms: Sequence[Domain], cap: int | None = None, seed: int | None = None) -> list[tuple]:
        """Cartesian product of probes for ``doms``; seeded subsample above ``cap``."""
        return sample_product([self(d) for d in doms], self.cap if cap is None else cap, self.seed if seed is None else seed)


def make_probes(ty: SimpleType, grid: Sequence[int], spec: TupleSpec, cap: int = 64, seed: int = 0) -> tuple[Value, ...]:
    return ProbeSet(grid, cap, seed)(spec.domain(ty))


def sample_product(pools: Sequence[Sequence], cap: int, seed: int = 0) -> list[tuple]:
    """All combinations if there are at most ``cap``; else ``cap`` seeded distinct ones."""
    total = 1
    for pool in pools:
        total *= len(pool)
    if total <= cap:
        return list(itertools.product(*pools))
    indices = sorted(random.Random(seed).sample(range(total), cap))
    out = []
    for index in indices:
        combo = []
        for pool in reversed(pools):
            index, r = divmod(index, len(pool))
            combo.append(pool[r])
        out.append(tuple(reversed(combo)))
    return out


def iter_product(pools: Sequence[Sequence]) -> Iterator[tuple]:
    return itertools.product(*pools)
