"""Expression language for interpretation functions J_f.

Expressions are type checked against interpretation domains and compiled
into Python closures.  The same closures evaluate over concrete naturals and
over :class:`~tuple_interp.polynomial.MaxMin` normal forms, which is how the
symbolic certifier obtains polynomial denotations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from .algebra import (
    NAT,
    Domain,
    FunDom,
    Functional,
    NatDom,
    ProbeSet,
    TupleDom,
    TupleSpec,
    Value,
    add_cost,
    apply_all,
    base_geq,
    base_gt,
    compare_values,
    cost_of,
    domain_args,
    null_value,
    show_value,
)
from .polynomial import OutsideFragment, nat_max, nat_min
from .terms import SimpleType
from .verdicts import Verdict, certified, refuted, unknown, validated


class InterpTypeError(Exception):
    def __init__(self, message: str, pos: int = -1):
        super().__init__(message if pos < 0 else f"{message} (at offset {pos})")
        self.pos = pos


class BadProjection(InterpTypeError):
    pass


class ArityMismatch(InterpTypeError):
    pass


class IterStepNotEndo(InterpTypeError):
    pass


class NonNaturalCount(InterpTypeError):
    pass


class UnboundName(InterpTypeError):
    pass


class ShapeMismatch(InterpTypeError):
    pass


# ------------------------------------------------------------------- AST


def _pos():
    return field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class Lit:
    value: int
    pos: int = _pos()


@dataclass(frozen=True)
class TupleE:
    items: tuple["IExpr", ...]
    pos: int = _pos()


@dataclass(frozen=True)
class Proj:
    expr: "IExpr"
    index: int  # 1-based
    pos: int = _pos()


@dataclass(frozen=True)
class Ref:
    name: str
    pos: int = _pos()


@dataclass(frozen=True)
class Call:
    fn: "IExpr"
    args: tuple["IExpr", ...]
    pos: int = _pos()


@dataclass(frozen=True)
class Lam:
    param: str
    body: "IExpr"
    pos: int = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "*", "max", "min"
    left: "IExpr"
    right: "IExpr"
    pos: int = _pos()


@dataclass(frozen=True)
class Div:
    expr: "IExpr"
    divisor: int
    pos: int = _pos()


@dataclass(frozen=True)
class Iter:
    count: "IExpr"
    step: "IExpr"
    base: "IExpr"
    pos: int = _pos()


@dataclass(frozen=True)
class Null:
    ty: SimpleType
    pos: int = _pos()


@dataclass(frozen=True)
class CostOf:
    expr: "IExpr"
    pos: int = _pos()


@dataclass(frozen=True)
class AddCost:
    amount: "IExpr"
    expr: "IExpr"
    pos: int = _pos()


IExpr = Lit | TupleE | Proj | Ref | Call | Lam | BinOp | Div | Iter | Null | CostOf | AddCost


def children(e: IExpr) -> tuple[IExpr, ...]:
    if isinstance(e, TupleE):
        return e.items
    if isinstance(e, (Proj, Div, CostOf)):
        return (e.expr,)
    if isinstance(e, Call):
        return (e.fn, *e.args)
    if isinstance(e, Lam):
        return (e.body,)
    if isinstance(e, BinOp):
        return (e.left, e.right)
    if isinstance(e, Iter):
        return (e.count, e.step, e.base)
    if isinstance(e, AddCost):
        return (e.amount, e.expr)
    return ()


def walk(e: IExpr) -> Iterator[IExpr]:
    yield e
    for c in children(e):
        yield from walk(c)


# -------------------------------------------------------------- printing

_ADD, _MUL, _POSTFIX = 1, 2, 3


def show_expr(e: IExpr, prec: int = 0) -> str:
    """Concrete syntax; reparsing yields an equal expression."""
    if isinstance(e, Lit):
        return str(e.value)
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, TupleE):
        return "<" + ", ".join(show_expr(i) for i in e.items) + ">"
    if isinstance(e, Proj):
        return f"{show_expr(e.expr, _POSTFIX)}.{e.index}"
    if isinstance(e, Call):
        return show_expr(e.fn, _POSTFIX) + "(" + ", ".join(show_expr(a) for a in e.args) + ")"
    if isinstance(e, Lam):
        text = f"\\{e.param}. {show_expr(e.body)}"
        return f"({text})" if prec > 0 else text
    if isinstance(e, BinOp):
        if e.op in ("max", "min"):
            return f"{e.op}({show_expr(e.left)}, {show_expr(e.right)})"
        level = _ADD if e.op == "+" else _MUL
        text = f"{show_expr(e.left, level)} {e.op} {show_expr(e.right, level + 1)}"
        return f"({text})" if prec > level else text
    if isinstance(e, Div):
        text = f"{show_expr(e.expr, _MUL)} / {e.divisor}"
        return f"({text})" if prec > _MUL else text
    if isinstance(e, Iter):
        return f"iter({show_expr(e.count)}, {show_expr(e.step)}, {show_expr(e.base)})"
    if isinstance(e, Null):
        return f"null({e.ty})"
    if isinstance(e, CostOf):
        return f"costof({show_expr(e.expr)})"
    if isinstance(e, AddCost):
        return f"addcost({show_expr(e.amount)}, {show_expr(e.expr)})"
    raise TypeError(e)


# ------------------------------------------------- typing and compiling

Env = tuple
Compiled = Callable[[Env], Value]


@dataclass(frozen=True)
class Scope:
    names: tuple[str, ...] = ()
    doms: tuple[Domain, ...] = ()

    def bind(self, name: str, dom: Domain) -> "Scope":
        return Scope(self.names + (name,), self.doms + (dom,))

    def lookup(self, name: str) -> tuple[int, Domain] | None:
        for slot in range(len(self.names) - 1, -1, -1):
            if self.names[slot] == name:
                return slot, self.doms[slot]
        return None

    def as_dict(self) -> dict[str, Domain]:
        return dict(zip(self.names, self.doms))


def _same_shape(a: Domain, b: Domain) -> bool:
    return a == b


class Compiler:
    """Type checks and compiles expressions in one pass."""

    def __init__(self, spec: TupleSpec):
        self.spec = spec

    def compile(self, e: IExpr, scope: Scope, expected: Domain | None = None) -> tuple[Domain, Compiled]:
        dom, fn = self._compile(e, scope, expected)
        if expected is not None and not _same_shape(dom, expected):
            raise ShapeMismatch(f"expression has shape {dom}, expected {expected}", e.pos)
        return dom, fn

    def _compile(self, e: IExpr, scope: Scope, expected: Domain | None) -> tuple[Domain, Compiled]:
        if isinstance(e, Lit):
            value = e.value
            return NAT, lambda env: value
        if isinstance(e, Ref):
            found = scope.lookup(e.name)
            if found is None:
                raise UnboundName(f"unbound name {e.name!r}", e.pos)
            slot, dom = found
            return dom, lambda env: env[slot]
        if isinstance(e, TupleE):
            if isinstance(expected, TupleDom) and expected.size != len(e.items):
                raise ArityMismatch(f"tuple has {len(e.items)} components, expected {expected.size}", e.pos)
            fns = [self._nat(i, scope) for i in e.items]
            return TupleDom(len(fns)), lambda env: tuple(f(env) for f in fns)
        if isinstance(e, Proj):
            dom, fn = self.compile(e.expr, scope)
            if not isinstance(dom, TupleDom):
                raise BadProjection(f"projection .{e.index} of a non-tuple of shape {dom}", e.pos)
            if not 1 <= e.index <= dom.size:
                raise BadProjection(f"projection .{e.index} out of range for {dom.size} components", e.pos)
            i = e.index - 1
            return NAT, lambda env: fn(env)[i]
        if isinstance(e, Call):
            return self._call(e, scope)
        if isinstance(e, Lam):
            if not isinstance(expected, FunDom):
                raise InterpTypeError(f"cannot infer the parameter shape of \\{e.param}", e.pos)
            return self.compile_lambda(e, scope, expected.arg, expected.res)
        if isinstance(e, BinOp):
            lf, rf = self._nat(e.left, scope), self._nat(e.right, scope)
            if e.op == "+":
                return NAT, lambda env: lf(env) + rf(env)
            if e.op == "*":
                return NAT, lambda env: lf(env) * rf(env)
            if e.op == "max":
                return NAT, lambda env: nat_max(lf(env), rf(env))
            if e.op == "min":
                return NAT, lambda env: nat_min(lf(env), rf(env))
            raise InterpTypeError(f"unknown operator {e.op}", e.pos)
        if isinstance(e, Div):
            if e.divisor <= 0:
                raise InterpTypeError("division by zero", e.pos)
            fn, d = self._nat(e.expr, scope), e.divisor
            return NAT, lambda env: fn(env) // d
        if isinstance(e, Iter):
            return self._iter(e, scope)
        if isinstance(e, Null):
            dom = self.spec.domain(e.ty)
            value = null_value(dom)
            return dom, lambda env: value
        if isinstance(e, CostOf):
            dom, fn = self.compile(e.expr, scope)
            if isinstance(dom, NatDom):
                raise ShapeMismatch("costof needs a tuple or function value", e.pos)
            return NAT, lambda env: cost_of(fn(env))
        if isinstance(e, AddCost):
            nf = self._nat(e.amount, scope)
            dom, fn = self.compile(e.expr, scope, expected)
            if isinstance(dom, NatDom):
                raise ShapeMismatch("addcost needs a tuple or function value", e.pos)
            return dom, lambda env: add_cost(nf(env), fn(env))
        raise TypeError(e)

    def _nat(self, e: IExpr, scope: Scope) -> Compiled:
        dom, fn = self.compile(e, scope)
        if not isinstance(dom, NatDom):
            raise ShapeMismatch(f"expected a natural number, found shape {dom}", e.pos)
        return fn

    def compile_lambda(self, e: Lam, scope: Scope, arg: Domain, res: Domain | None) -> tuple[Domain, Compiled]:
        res_dom, body = self.compile(e.body, scope.bind(e.param, arg), res)
        label = "\\" + e.param + ". " + show_expr(e.body)

        def make(env):
            return Functional(arg, res_dom, lambda d: body(env + (d,)), label)

        return FunDom(arg, res_dom), make

    def _call(self, e: Call, scope: Scope) -> tuple[Domain, Compiled]:
        if isinstance(e.fn, Lam):
            arg_doms = [self.compile(a, scope) for a in e.args]
            fdom, head = self.compile_lambda(e.fn, scope, arg_doms[0][0], None)
        else:
            fdom, head = self.compile(e.fn, scope)
        dom = fdom
        fns = []
        for i, a in enumerate(e.args):
            if not isinstance(dom, FunDom):
                raise ArityMismatch(f"applied to {len(e.args)} arguments, but accepts only {i}", e.pos)
            _, afn = self.compile(a, scope, dom.arg)
            fns.append(afn)
            dom = dom.res
        if len(fns) == 1:
            a0 = fns[0]
            return dom, lambda env: head(env)(a0(env))
        return dom, lambda env: apply_all(head(env), [f(env) for f in fns])

    def _iter(self, e: Iter, scope: Scope) -> tuple[Domain, Compiled]:
        cdom, count = self.compile(e.count, scope)
        if not isinstance(cdom, NatDom):
            raise NonNaturalCount(f"iteration count has shape {cdom}", e.count.pos)
        tdom, base = self.compile(e.base, scope)
        if isinstance(e.step, Lam):
            try:
                sdom, step = self.compile_lambda(e.step, scope, tdom, tdom)
            except ShapeMismatch as exc:
                raise IterStepNotEndo(f"iteration step must map {tdom} to itself: {exc}", e.step.pos) from None
        else:
            sdom, step = self.compile(e.step, scope)
            if sdom != FunDom(tdom, tdom):
                raise IterStepNotEndo(f"iteration step has shape {sdom}, expected {FunDom(tdom, tdom)}", e.step.pos)

        def run(env):
            n = count(env)
            if not isinstance(n, int):
                raise OutsideFragment("iteration with a symbolic count")
            v = base(env)
            f = step(env)
            for _ in range(n):
                v = f(v)
            return v

        return tdom, run


def typecheck_expr(e: IExpr, context: Mapping[str, Domain], spec: TupleSpec, expected: Domain | None = None) -> Domain:
    scope = Scope(tuple(context), tuple(context.values()))
    dom, _ = Compiler(spec).compile(e, scope, expected)
    return dom


def eval_expr(e: IExpr, env: Mapping[str, Value], spec: TupleSpec, context: Mapping[str, Domain] | None = None) -> Value:
    from .algebra import domain_of

    context = dict(context) if context is not None else {k: domain_of(v) for k, v in env.items()}
    scope = Scope(tuple(context), tuple(context.values()))
    _, fn = Compiler(spec).compile(e, scope)
    return fn(tuple(env[name] for name in context))


# ------------------------------------------------------ interpretations


@dataclass(frozen=True)
class InterpDef:
    symbol: str
    params: tuple[str, ...]
    body: IExpr

    def __str__(self) -> str:
        return f"interp {self.symbol}({', '.join(self.params)}) = {show_expr(self.body)}"

    def flattened(self) -> tuple[tuple[str, ...], IExpr]:
        """Parameters including leading lambdas of a function-valued body."""
        params, body = list(self.params), self.body
        while isinstance(body, Lam):
            params.append(body.param)
            body = body.body
        return tuple(params), body


@dataclass
class CompiledInterp:
    definition: InterpDef
    input_doms: tuple[Domain, ...]
    output_dom: Domain
    fn: Compiled

    def __call__(self, *args: Value) -> Value:
        return self.fn(tuple(args))

    @property
    def flat_doms(self) -> tuple[Domain, ...]:
        params, _ = self.definition.flattened()
        extra = len(params) - len(self.input_doms)
        args, _ = domain_args(self.output_dom)
        return self.input_doms + tuple(args[:extra])

    def apply_flat(self, args: Sequence[Value]) -> Value:
        k = len(self.input_doms)
        return apply_all(self.fn(tuple(args[:k])), args[k:])


class MissingInterpretation(InterpTypeError):
    pass


class Interpretation(Mapping[str, CompiledInterp]):
    """A checked interpretation map J for a signature."""

    def __init__(self, signature, spec: TupleSpec, defs: Mapping[str, InterpDef]):
        self.signature = signature
        self.spec = spec
        self.defs = dict(defs)
        self._compiled: dict[str, CompiledInterp] = {}
        compiler = Compiler(spec)
        for name, decl in signature.items():
            d = self.defs.get(name)
            if d is None:
                raise MissingInterpretation(f"no interpretation for symbol {name!r}")
            if len(d.params) != decl.arity:
                raise ArityMismatch(
                    f"interpretation of {name} has {len(d.params)} parameters, symbol has arity {decl.arity}",
                    d.body.pos,
                )
            doms = tuple(spec.domain(t) for t in decl.inputs)
            out = spec.domain(decl.output)
            scope = Scope(d.params, doms)
            try:
                _, fn = compiler.compile(d.body, scope, out)
            except InterpTypeError as exc:
                raise type(exc)(f"in interpretation of {name}: {exc}") from None
            self._compiled[name] = CompiledInterp(d, doms, out, fn)
        extra = set(self.defs) - set(signature)
        if extra:
            raise UnboundName(f"interpretation for undeclared symbol {sorted(extra)[0]!r}")

    def __getitem__(self, name: str) -> CompiledInterp:
        return self._compiled[name]

    def __iter__(self):
        return iter(self._compiled)

    def __len__(self) -> int:
        return len(self._compiled)


# ----------------------------------------------------------- analyzer


@dataclass(frozen=True)
class IterObligation:
    """Side condition step(v) ⪰ v of an iteration."""

    node: Iter
    context: tuple[tuple[str, Domain], ...]
    discharged: bool
    method: str  # "syntactic" or "open"; "probe" once tested

    def __str__(self) -> str:
        return f"{show_expr(self.node.step)} extensive: {self.method}"


@dataclass(frozen=True)
class MonotonicityReport:
    weakly_monotonic: bool
    strict_in: frozenset[str]
    obligations: tuple[IterObligation, ...]
    params: tuple[str, ...] = ()

    @property
    def strict_indices(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.params) if p in self.strict_in)

    @property
    def strict_in_all(self) -> bool:
        return self.weakly_monotonic and set(self.params) <= self.strict_in


@dataclass(frozen=True)
class _Info:
    weak: bool
    strict: frozenset[str]
    proper: bool = True  # for function values: a strongly monotonic functional


_NONE: frozenset[str] = frozenset()


class _Analyzer:
    def __init__(self, context: Mapping[str, Domain]):
        self.context = dict(context)
        self.obligations: list[IterObligation] = []

    def run(self, e: IExpr, ctx: dict[str, Domain]) -> _Info:
        if isinstance(e, Lit) or isinstance(e, Null):
            return _Info(True, _NONE)
        if isinstance(e, Ref):
            return _Info(True, frozenset([e.name]))
        if isinstance(e, TupleE):
            infos = [self.run(i, ctx) for i in e.items]
            return _Info(all(i.weak for i in infos), infos[0].strict if infos else _NONE)
        if isinstance(e, Proj):
            inner = self.run(e.expr, ctx)
            return _Info(inner.weak, inner.strict if e.index == 1 else _NONE)
        if isinstance(e, CostOf):
            inner = self.run(e.expr, ctx)
            return _Info(inner.weak and inner.proper, inner.strict)
        if isinstance(e, AddCost):
            a, b = self.run(e.amount, ctx), self.run(e.expr, ctx)
            return _Info(a.weak and b.weak, a.strict | b.strict, b.proper)
        if isinstance(e, BinOp):
            a, b = self.run(e.left, ctx), self.run(e.right, ctx)
            strict = a.strict | b.strict if e.op == "+" else _NONE
            return _Info(a.weak and b.weak, strict)
        if isinstance(e, Div):
            inner = self.run(e.expr, ctx)
            return _Info(inner.weak, _NONE)
        if isinstance(e, Lam):
            body = self.run(e.body, {**ctx, e.param: None})
            strict = body.strict - {e.param}
            proper = body.weak and body.proper and e.param in body.strict
            return _Info(body.weak, strict, proper)
        if isinstance(e, Call):
            head = self.run(e.fn, ctx)
            args = [self.run(a, ctx) for a in e.args]
            weak = head.weak and head.proper and all(a.weak and a.proper for a in args)
            strict = head.strict.union(*(a.strict for a in args)) if weak else _NONE
            return _Info(weak, strict)
        if isinstance(e, Iter):
            return self._iter(e, ctx)
        raise TypeError(e)

    def _iter(self, e: Iter, ctx) -> _Info:
        count = self.run(e.count, ctx)
        base = self.run(e.base, ctx)
        step = self.run(e.step, ctx)
        step_strict_in_v = False
        if isinstance(e.step, Lam):
            body = self.run(e.step.body, {**ctx, e.step.param: None})
            step_strict_in_v = e.step.param in body.strict and body.weak
            syntactic = _extensive(e.step.body, e.step.param)
        else:
            step_strict_in_v = step.proper and step.weak
            syntactic = False
        self.obligations.append(
            IterObligation(e, tuple(ctx.items()), syntactic, "syntactic" if syntactic else "open")
        )
        weak = count.weak and base.weak and step.weak and base.proper and step.proper
        strict = base.strict if (weak and step_strict_in_v) else _NONE
        return _Info(weak, strict, base.proper and step.proper)


def _covers(e: IExpr, target: IExpr) -> bool:
    """Syntactic evidence that ``e ≥ target`` for natural-valued expressions."""
    if e == target:
        return True
    if isinstance(e, BinOp) and e.op in ("+", "max"):
        return _covers(e.left, target) or _covers(e.right, target)
    return False


def _mentions_as_argument(e: IExpr, name: str) -> bool:
    return isinstance(e, Call) and (
        any(a == Ref(name) for a in e.args) or _mentions_as_argument(e.fn, name)
    )


def _cost_covers(e: IExpr, z: str) -> bool:
    """``e ≥ costof(z)``: either z.1 occurs additively or e = F(.., z, ..).1."""
    if _covers(e, Proj(Ref(z), 1)):
        return True
    if isinstance(e, Proj) and e.index == 1 and _mentions_as_argument(e.expr, z):
        return True
    if isinstance(e, BinOp) and e.op in ("+", "max"):
        return _cost_covers(e.left, z) or _cost_covers(e.right, z)
    return False


def _extensive(body: IExpr, z: str) -> bool:
    """Syntactic proof that λz.body satisfies body ⪰ z."""
    if body == Ref(z):
        return True
    if isinstance(body, AddCost):
        return _extensive(body.expr, z)
    if isinstance(body, TupleE):
        if not body.items or not _cost_covers(body.items[0], z):
            return False
        return all(_covers(item, Proj(Ref(z), j)) for j, item in enumerate(body.items[1:], start=2))
    return _covers(body, Ref(z))


def analyze_monotonicity(e: IExpr, params: Sequence[str], context: Mapping[str, Domain] | None = None) -> MonotonicityReport:
    analyzer = _Analyzer(context or {})
    info = analyzer.run(e, {p: (context or {}).get(p) for p in params})
    strict = info.strict & frozenset(params) if info.weak else _NONE
    return MonotonicityReport(info.weak, strict, tuple(analyzer.obligations), tuple(params))


def analyze_definition(d: InterpDef, doms: Sequence[Domain] | None = None) -> MonotonicityReport:
    params, body = d.flattened()
    return analyze_monotonicity(body, params, dict(zip(params, doms)) if doms is not None else None)


# ------------------------------------------- strong monotonicity checks


@dataclass(frozen=True)
class MonotonicityWitness:
    """J(larger) fails to dominate J(smaller) although larger ≻/⪰ smaller."""

    symbol: str
    param: str
    smaller: tuple
    larger: tuple
    result_smaller: Value
    result_larger: Value
    strict: bool

    def __str__(self) -> str:
        rel = "≻" if self.strict else "⪰"
        args_s = ", ".join(show_value(v) for v in self.smaller)
        args_l = ", ".join(show_value(v) for v in self.larger)
        return (
            f"{self.symbol}: raising {self.param} ({rel}) from ({args_s}) to ({args_l}) "
            f"gives {show_value(self.result_smaller)} then {show_value(self.result_larger)}"
        )


def _raise_component(value: tuple, j: int) -> tuple:
    return value[:j] + (value[j] + 1,) + value[j + 1 :]


def check_strongly_monotonic(
    symbol: str, J: Interpretation, probes: ProbeSet, valuation_cap: int = 4096
) -> tuple[Verdict, MonotonicityReport]:
    compiled = J[symbol]
    report = analyze_definition(compiled.definition, compiled.flat_doms)
    open_obligations = [o for o in report.obligations if not o.discharged]
    if report.strict_in_all and not open_obligations:
        return certified("strict in every argument by structure"), report
    params, _ = compiled.definition.flattened()
    doms = compiled.flat_doms
    _, result_dom = domain_args(compiled.output_dom)
    tried = 0
    for valuation in probes.argument_tuples(doms, cap=valuation_cap):
        base_result = compiled.apply_flat(valuation)
        for i, dom in enumerate(doms):
            bigger = list(valuation)
            bigger[i] = add_cost(1, valuation[i])
            result = compiled.apply_flat(bigger)
            tried += 1
            if not base_gt(result, base_result):
                witness = MonotonicityWitness(symbol, params[i], valuation, tuple(bigger), base_result, result, True)
                return refuted(witness, str(witness)), report
            if isinstance(dom, TupleDom):
                for j in range(1, dom.size):
                    bigger[i] = _raise_component(valuation[i], j)
                    result = compiled.apply_flat(bigger)
                    tried += 1
                    if not base_geq(result, base_result):
                        witness = MonotonicityWitness(
                            symbol, params[i], valuation, tuple(bigger), base_result, result, False
                        )
                        return refuted(witness, str(witness)), report
    if tried == 0:
        return unknown("no probes to test"), report
    reasons = []
    if not report.strict_in_all:
        reasons.append("strictness shown on probes only")
    if open_obligations:
        reasons.append("iteration side condition shown on probes only")
        held = _obligations_hold(open_obligations, J.spec, probes, valuation_cap)
        if held is None:
            reasons.append("side condition not testable, monotonicity probed directly")
        elif not held:
            reasons.append("side condition fails on some probe, monotonicity probed directly")
    return validated(tried, "; ".join(reasons)), report


def _obligations_hold(obligations: Sequence[IterObligation], spec: TupleSpec, probes: ProbeSet, cap: int) -> bool | None:
    """Probe the side conditions; None when some context shape is unknown."""
    compiler = Compiler(spec)
    for ob in obligations:
        names = [n for n, d in ob.context if d is not None]
        doms = [d for _, d in ob.context if d is not None]
        if len(names) != len(ob.context):
            return None
        scope = Scope(tuple(names), tuple(doms))
        tdom, _ = compiler.compile(ob.node.base, scope)
        _, step = compiler.compile(ob.node.step, scope, FunDom(tdom, tdom))
        for valuation in probes.argument_tuples(doms + [tdom], cap=cap):
            f = step(tuple(valuation[:-1]))
            v = valuation[-1]
            if not compare_values(f(v), v, tdom, probes).geq:
                return False
    return True
