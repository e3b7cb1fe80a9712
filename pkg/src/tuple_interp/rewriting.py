"""Rules, the one-step rewrite relation, and the derivation-height oracle."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .terms import (
    Abs,
    App,
    Arrow,
    Base,
    BVar,
    FApp,
    IllTyped,
    Signature,
    SimpleType,
    Term,
    TermError,
    Var,
    free_vars,
    instantiate,
    loose_indices,
    replace_at,
    shift,
    subterm_at,
)


class RuleError(TermError):
    pass


class TypeMismatch(RuleError):
    pass


class ExtraRhsVariable(RuleError):
    pass


class FuelExhausted(Exception):
    """The explored-step budget ran out (or a reduction cycle was found)."""

    def __init__(self, message: str = "fuel exhausted", term: Term | None = None):
        super().__init__(message)
        self.term = term


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"

    @property
    def root(self) -> str | None:
        head = self.lhs
        while isinstance(head, App):
            head = head.fun
        return head.symbol if isinstance(head, FApp) else None


@dataclass(frozen=True)
class AFS:
    signature: Signature
    rules: tuple[Rule, ...]
    eta: bool = False

    def __post_init__(self):
        for rule in self.rules:
            validate_rule(rule, self.signature)

    @property
    def defined_symbols(self) -> frozenset[str]:
        return frozenset(r.root for r in self.rules if r.root is not None)


StepLabel = Union[int, str]


@dataclass(frozen=True)
class RewriteStep:
    source: Term
    target: Term
    rule: StepLabel  # rule index, "beta" or "eta"
    position: tuple[int, ...]

    def replay(self, afs: AFS) -> Term:
        """Recompute the target from source, rule and position."""
        sub = subterm_at(self.source, self.position)
        if self.rule == "beta":
            reduct = _beta(sub)
        elif self.rule == "eta":
            reduct = _eta(sub)
        else:
            reduct = _apply_rule(afs.rules[self.rule], sub)
        if reduct is None:
            raise ValueError("step does not replay")
        return replace_at(self.source, self.position, reduct)


def validate_rule(rule: Rule, sig: Signature) -> None:
    from .terms import type_of

    type_of(rule.lhs, sig)
    type_of(rule.rhs, sig)
    if rule.lhs.type != rule.rhs.type:
        raise TypeMismatch(f"lhs has type {rule.lhs.type} but rhs has type {rule.rhs.type}")
    extra = free_vars(rule.rhs) - free_vars(rule.lhs)
    if extra:
        names = ", ".join(sorted(v.name for v in extra))
        raise ExtraRhsVariable(f"rhs variables not in lhs: {names}")
    if isinstance(rule.lhs, Var):
        raise RuleError("lhs may not be a variable")


# --------------------------------------------------------------- matching


def match(pattern: Term, term: Term, binding: dict[Var, Term] | None = None, depth: int = 0) -> dict[Var, Term] | None:
    """Syntactic matching; ``depth`` counts binders entered inside the pattern.

    A pattern variable below ``depth`` pattern binders only matches subterms in
    which none of those binders occurs; the binding is stored relative to the
    root of the match.
    """
    binding = {} if binding is None else binding
    if isinstance(pattern, Var):
        if pattern.ty != term.type:
            return None
        if any(i < depth for i in loose_indices(term)):
            return None
        value = shift(term, -depth) if depth else term
        seen = binding.get(pattern)
        if seen is None:
            binding[pattern] = value
            return binding
        return binding if seen == value else None
    if isinstance(pattern, BVar):
        return binding if pattern == term else None
    if isinstance(pattern, Abs):
        if not isinstance(term, Abs) or term.var_ty != pattern.var_ty:
            return None
        return match(pattern.body, term.body, binding, depth + 1)
    if isinstance(pattern, App):
        if not isinstance(term, App):
            return None
        if match(pattern.fun, term.fun, binding, depth) is None:
            return None
        return match(pattern.arg, term.arg, binding, depth)
    if not isinstance(term, FApp) or term.symbol != pattern.symbol or len(term.args) != len(pattern.args):
        return None
    for p, t in zip(pattern.args, term.args):
        if match(p, t, binding, depth) is None:
            return None
    return binding


def _plug(t: Term, binding: dict[Var, Term], depth: int = 0) -> Term:
    if isinstance(t, Var):
        value = binding[t]
        return shift(value, depth) if depth else value
    if isinstance(t, BVar):
        return t
    if isinstance(t, Abs):
        return Abs(t.var_ty, _plug(t.body, binding, depth + 1), t.name)
    if isinstance(t, App):
        return App(_plug(t.fun, binding, depth), _plug(t.arg, binding, depth))
    return FApp(t.symbol, tuple(_plug(a, binding, depth) for a in t.args), t.ty)


def _apply_rule(rule: Rule, t: Term) -> Term | None:
    binding = match(rule.lhs, t)
    return None if binding is None else _plug(rule.rhs, binding)


def _beta(t: Term) -> Term | None:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return instantiate(t.fun.body, t.arg)
    return None


def _eta(t: Term) -> Term | None:
    if isinstance(t, Abs) and isinstance(t.body, App) and t.body.arg == BVar(0, t.var_ty):
        head = t.body.fun
        if 0 not in loose_indices(head):
            return shift(head, -1)
    return None


# -------------------------------------------------------------- rewriting


def _redexes(t: Term, afs: AFS, position: tuple[int, ...]) -> Iterator[tuple[StepLabel, tuple[int, ...], Term]]:
    for index, rule in enumerate(afs.rules):
        reduct = _apply_rule(rule, t)
        if reduct is not None:
            yield index, position, reduct
    reduct = _beta(t)
    if reduct is not None:
        yield "beta", position, reduct
    if afs.eta:
        reduct = _eta(t)
        if reduct is not None:
            yield "eta", position, reduct
    if isinstance(t, Abs):
        for label, pos, r in _redexes(t.body, afs, position + (0,)):
            yield label, pos, r
    elif isinstance(t, App):
        for i, child in enumerate((t.fun, t.arg)):
            yield from _redexes(child, afs, position + (i,))
    elif isinstance(t, FApp):
        for i, child in enumerate(t.args):
            yield from _redexes(child, afs, position + (i,))


def successors(t: Term, afs: AFS) -> list[RewriteStep]:
    """All one-step reducts of ``t``, without α-duplicate targets."""
    steps = []
    seen: set[Term] = set()
    for label, position, reduct in _redexes(t, afs, ()):
        target = replace_at(t, position, reduct)
        if target in seen:
            continue
        seen.add(target)
        steps.append(RewriteStep(t, target, label, position))
    return steps


def normalize(t: Term, afs: AFS, fuel: int) -> Term:
    """Follow the first successor until a normal form; at most ``fuel`` steps."""
    for _ in range(fuel + 1):
        steps = successors(t, afs)
        if not steps:
            return t
        if _ == fuel:
            break
        t = steps[0].target
    raise FuelExhausted(f"no normal form within {fuel} steps", t)


class DhtOracle:
    """Exhaustive derivation-height search sharing one memo across queries.

    ``fuel`` bounds the number of rewrite steps explored over the lifetime of
    the oracle; memoised terms cost nothing to revisit.
    """

    def __init__(self, afs: AFS, fuel: int = 100_000):
        self.afs = afs
        self.fuel = fuel
        self.explored = 0
        self.memo: dict[Term, int] = {}

    def __call__(self, t: Term) -> int:
        memo = self.memo
        if t in memo:
            return memo[t]
        on_stack = {t}
        stack: list[tuple[Term, Iterator[Term], int]] = [(t, self._targets(t), 0)]
        while stack:
            term, targets, best = stack[-1]
            child = next(targets, None)
            if child is None:
                stack.pop()
                on_stack.discard(term)
                memo[term] = best
                if stack:
                    parent, ptargets, pbest = stack[-1]
                    stack[-1] = (parent, ptargets, max(pbest, best + 1))
                continue
            known = memo.get(child)
            if known is not None:
                stack[-1] = (term, targets, max(best, known + 1))
                continue
            if child in on_stack:
                raise FuelExhausted("reduction cycle: derivation height is unbounded", child)
            on_stack.add(child)
            stack.append((child, self._targets(child), 0))
        return memo[t]

    def _targets(self, t: Term) -> Iterator[Term]:
        for step in successors(t, self.afs):
            self.explored += 1
            if self.explored > self.fuel:
                raise FuelExhausted(f"derivation height search exceeded {self.fuel} steps", t)
            yield step.target


def derivation_height(t: Term, afs: AFS, fuel: int = 100_000) -> int:
    return DhtOracle(afs, fuel)(t)


def reachable_steps(t: Term, afs: AFS, fuel: int) -> Iterator[RewriteStep]:
    """Every step between terms reachable from ``t``, each source visited once."""
    seen = {t}
    frontier = [t]
    explored = 0
    while frontier:
        term = frontier.pop()
        for step in successors(term, afs):
            explored += 1
            if explored > fuel:
                raise FuelExhausted(f"reachability search exceeded {fuel} steps", term)
            yield step
            if step.target not in seen:
                seen.add(step.target)
                frontier.append(step.target)


# ------------------------------------------------- data and basic terms


def data_constructors(afs: AFS) -> frozenset[str]:
    defined = afs.defined_symbols
    return frozenset(
        name for name, decl in afs.signature.items() if decl.first_order and name not in defined
    )


def is_data(t: Term, afs: AFS, constructors: frozenset[str] | None = None) -> bool:
    constructors = data_constructors(afs) if constructors is None else constructors
    return isinstance(t, FApp) and t.symbol in constructors and all(is_data(a, afs, constructors) for a in t.args)


def is_basic(t: Term, afs: AFS) -> bool:
    constructors = data_constructors(afs)
    return (
        isinstance(t, FApp)
        and t.symbol not in constructors
        and all(is_data(a, afs, constructors) for a in t.args)
    )


class _Enumerator:
    def __init__(self, sig: Signature, symbols: list[str]):
        self.sig = sig
        self.symbols = symbols
        self.data = lru_cache(maxsize=None)(self._data)

    def _data(self, sort: SimpleType, size: int) -> tuple[Term, ...]:
        out = []
        for name in self.symbols:
            decl = self.sig[name]
            if decl.output != sort:
                continue
            for args in self.tuples(decl.inputs, size - 1):
                out.append(FApp(name, args, decl.output))
        return tuple(out)

    def tuples(self, types, size: int) -> Iterator[tuple[Term, ...]]:
        if not types:
            if size == 0:
                yield ()
            return
        first, rest = types[0], types[1:]
        for k in range(1, size - len(rest) + 1):
            for head in self.data(first, k):
                for tail in self.tuples(rest, size - k):
                    yield (head, *tail)


def enumerate_data_terms(afs: AFS, sort: SimpleType, size: int) -> tuple[Term, ...]:
    """Data terms of exactly the given size."""
    return _Enumerator(afs.signature, sorted(data_constructors(afs))).data(sort, size)


def enumerate_basic_terms(afs: AFS, max_size: int) -> list[Term]:
    """All basic terms of size ≤ ``max_size``, by size then declaration order."""
    constructors = data_constructors(afs)
    enum = _Enumerator(afs.signature, sorted(constructors))
    out = []
    for size in range(1, max_size + 1):
        for name, decl in afs.signature.items():
            if name in constructors or not all(isinstance(t, Base) for t in decl.inputs):
                continue
            for args in enum.tuples(decl.inputs, size - 1):
                out.append(FApp(name, args, decl.output))
    return out


class ClosedTermEnumerator:
    """Closed terms (including abstractions and applications) by type and size.

    Types are restricted to those occurring in the signature, which keeps the
    universe of application heads finite.
    """

    def __init__(self, sig: Signature, extra_types: tuple[SimpleType, ...] = ()):
        self.sig = sig
        self.types = sorted(sig.types() | set(extra_types), key=str)
        self._cache: dict = {}

    def terms(self, ty: SimpleType, size: int, ctx: tuple[SimpleType, ...] = ()) -> tuple[Term, ...]:
        key = (ty, size, ctx)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: list[Term] = []
        if size == 1:
            out.extend(BVar(i, t) for i, t in enumerate(reversed(ctx)) if t == ty)
        for name, decl in sorted(self.sig.items()):
            if decl.output == ty:
                out.extend(FApp(name, args, ty) for args in self._tuples(decl.inputs, size - 1, ctx))
        if isinstance(ty, Arrow) and size >= 2:
            names = "xyzuvw"
            name = names[len(ctx) % len(names)]
            out.extend(Abs(ty.left, body, name) for body in self.terms(ty.right, size - 1, ctx + (ty.left,)))
        for left in self.types:
            fty = Arrow(left, ty)
            if fty not in self.types:
                continue
            for k in range(1, size - 1):
                for fun in self.terms(fty, k, ctx):
                    for arg in self.terms(left, size - 1 - k, ctx):
                        out.append(App(fun, arg))
        result = tuple(out)
        self._cache[key] = result
        return result

    def _tuples(self, types, size, ctx) -> Iterator[tuple[Term, ...]]:
        if not types:
            if size == 0:
                yield ()
            return
        first, rest = types[0], types[1:]
        for k in range(1, size - len(rest) + 1):
            for head in self.terms(first, k, ctx):
                for tail in self._tuples(rest, size - k, ctx):
                    yield (head, *tail)

    def up_to(self, ty: SimpleType, max_size: int) -> Iterator[Term]:
        for size in range(1, max_size + 1):
            yield from self.terms(ty, size)


def ground_base_terms(afs: AFS, max_size: int) -> Iterator[Term]:
    """Closed terms of every sort with size ≤ ``max_size``."""
    enum = ClosedTermEnumerator(afs.signature)
    for sort in afs.signature.sorts:
        yield from enum.up_to(Base(sort), max_size)


__all__ = [
    "AFS",
    "ClosedTermEnumerator",
    "DhtOracle",
    "ExtraRhsVariable",
    "FuelExhausted",
    "IllTyped",
    "RewriteStep",
    "Rule",
    "RuleError",
    "TypeMismatch",
    "data_constructors",
    "derivation_height",
    "enumerate_basic_terms",
    "enumerate_data_terms",
    "ground_base_terms",
    "is_basic",
    "is_data",
    "match",
    "normalize",
    "reachable_steps",
    "successors",
    "validate_rule",
]
