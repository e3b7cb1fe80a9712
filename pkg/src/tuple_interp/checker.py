"""Compatibility of a rewrite system with an interpretation.

Rules are first tried symbolically: both sides are evaluated over component
variables into max/min-polynomial normal forms and compared by coefficient
dominance.  Rules outside that fragment are tested on probe valuations, which
either refutes them with a replayable counterexample or validates them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .algebra import (
    Comparison,
    Domain,
    Mono,
    ProbeSet,
    TupleDom,
    Value,
    apply_all,
    compare_values,
    domain_args,
    phi,
    show_value,
)
from .interp import Interpretation, MonotonicityReport, check_strongly_monotonic
from .polynomial import MaxMin, OutsideFragment, Poly, record_lattice_args
from .rewriting import AFS, ClosedTermEnumerator, FuelExhausted, RewriteStep, Rule, reachable_steps
from .terms import (
    Abs,
    App,
    Arrow,
    Base,
    BVar,
    FApp,
    SimpleType,
    Term,
    Var,
    free_vars,
    instantiate,
    occurs_bound,
    shift,
    show,
    type_order,
)
from .verdicts import Status, Verdict, certified, refuted, unknown, validated, weakest


class UnboundVariable(Exception):
    pass


class InternalSoundness(AssertionError):
    """A β or η instance failed to decrease; by theorem this is a bug."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


Valuation = Mapping[Var, Value]


# ------------------------------------------------------------ denotation


def interpret_term(t: Term, J: Interpretation, alpha: Mapping[Var | str, Value] | None = None) -> Value:
    """The value of ``t`` under ``J``; abstractions go through Φ."""
    alpha = alpha or {}
    spec = J.spec

    def lookup(v: Var) -> Value:
        if v in alpha:
            return alpha[v]
        if v.name in alpha:
            return alpha[v.name]
        raise UnboundVariable(f"no value for free variable {v.name}")

    def go(t: Term, env: tuple) -> Value:
        if isinstance(t, FApp):
            return J[t.symbol](*(go(a, env) for a in t.args))
        if isinstance(t, Var):
            return lookup(t)
        if isinstance(t, BVar):
            return env[-1 - t.index]
        if isinstance(t, App):
            return go(t.fun, env)(go(t.arg, env))
        flag = Mono.STRONG if occurs_bound(t.body, 0) else Mono.CONSTANT
        body = t.body
        return phi(
            lambda d: go(body, env + (d,)),
            spec.domain(t.var_ty),
            spec.domain(body.type),
            flag,
            f"\\{t.name}",
        )

    return go(t, ())


# -------------------------------------------------------- counterexamples


@dataclass(frozen=True)
class Counterexample:
    """A valuation (plus arguments at arrow types) where lhs ≻ rhs fails."""

    label: str
    lhs_term: Term
    rhs_term: Term
    valuation: tuple[tuple[Var, Value], ...]
    args: tuple[Value, ...]
    lhs: Value
    rhs: Value

    def replay(self, J: Interpretation) -> tuple[Value, Value]:
        alpha = dict(self.valuation)
        left = apply_all(interpret_term(self.lhs_term, J, alpha), self.args)
        right = apply_all(interpret_term(self.rhs_term, J, alpha), self.args)
        return left, right

    def __str__(self) -> str:
        vals = ", ".join(f"{v.name}={show_value(x)}" for v, x in self.valuation)
        text = f"{self.label} at [{vals}]"
        if self.args:
            text += " applied to " + ", ".join(show_value(a) for a in self.args)
        return text + f": {show_value(self.lhs)} vs {show_value(self.rhs)}"


# ------------------------------------------------------------ symbolic


def symbolic_certify(lhs: Sequence, rhs: Sequence) -> Status:
    """CERTIFIED when lhs ≻ rhs follows by dominance of the normal forms."""
    if len(lhs) != len(rhs):
        return Status.UNKNOWN
    for i, (a, b) in enumerate(zip(lhs, rhs)):
        if not MaxMin.lift(a).geq(MaxMin.lift(b), 1 if i == 0 else 0):
            return Status.UNKNOWN
    return Status.CERTIFIED


def _symbolic_tuple(name: str, dom: Domain) -> tuple[MaxMin, ...]:
    return tuple(MaxMin.var(f"{name}.{j}") for j in range(1, dom.size + 1))


class _SymbolicRule:
    """Both sides of a rule as functions of a substitution on component variables."""

    def __init__(self, rule: Rule, J: Interpretation):
        spec = J.spec
        self.rule = rule
        self.J = J
        self.vars = sorted(free_vars(rule.lhs), key=lambda v: v.name)
        doms = [spec.domain(v.type) for v in self.vars]
        extra, result = domain_args(spec.domain(rule.lhs.type))
        if not all(isinstance(d, TupleDom) for d in doms + extra):
            raise OutsideFragment("rule has arrow-typed variables or arguments")
        self.alpha = {v: _symbolic_tuple(v.name, d) for v, d in zip(self.vars, doms)}
        self.args = tuple(_symbolic_tuple(f"_arg{i}", d) for i, d in enumerate(extra, 1))

    def evaluate(self, subst: Mapping[str, Poly]) -> tuple[tuple, tuple]:
        def sub(x: tuple) -> tuple:
            return tuple(c.compose(subst) for c in x)

        alpha = {v: sub(x) for v, x in self.alpha.items()}
        args = [sub(a) for a in self.args]
        lhs = apply_all(interpret_term(self.rule.lhs, self.J, alpha), args)
        rhs = apply_all(interpret_term(self.rule.rhs, self.J, alpha), args)
        return lhs, rhs


def _compose_subst(subst: dict[str, Poly], var: str, value: Poly) -> dict[str, Poly]:
    out = {k: p.compose({var: value}) for k, p in subst.items()}
    out.setdefault(var, value)
    return out


def certify_rule(rule: Rule, J: Interpretation, splits: int = 3) -> Verdict:
    """Symbolic certification, splitting on max/min operand order when needed.

    When plain dominance fails and some max/min compared two bare variables
    u and w, the check is repeated in the cases u = w + t and w = u + t for a
    fresh t; together they cover every natural valuation.
    """
    try:
        sym = _SymbolicRule(rule, J)
    except OutsideFragment as exc:
        return unknown(str(exc))
    fresh = itertools.count(1)

    def attempt(subst: dict[str, Poly], depth: int) -> bool:
        with record_lattice_args() as pairs:
            lhs, rhs = sym.evaluate(subst)
        if symbolic_certify(lhs, rhs) is Status.CERTIFIED:
            return True
        if depth == 0:
            return False
        seen = set()
        for a, b in pairs:
            u, w = a.single_variable(), b.single_variable()
            if u is None or w is None or u == w or (u, w) in seen:
                continue
            seen.add((u, w))
            t = Poly.var(f"_t{next(fresh)}")
            if attempt(_compose_subst(subst, u, Poly.var(w) + t), depth - 1) and attempt(
                _compose_subst(subst, w, Poly.var(u) + t), depth - 1
            ):
                return True
            if len(seen) >= 4:
                break
        return False

    try:
        if attempt({}, splits):
            return certified("dominance of normal forms")
    except OutsideFragment as exc:
        return unknown(str(exc))
    return unknown("no dominating normal form found")


# ------------------------------------------------------------- probing


@dataclass(frozen=True)
class CheckConfig:
    grid: tuple[int, ...] = (0, 1, 2, 3)
    probe_cap: int = 64
    valuation_cap: int = 4096
    seed: int = 0
    eta: bool | None = None
    fuel: int = 10_000
    beta_samples: int = 200
    eta_samples: int = 50
    symbolic: bool = True

    def probes(self) -> ProbeSet:
        return ProbeSet(self.grid, self.probe_cap, self.seed)


def _compare(lhs: Value, rhs: Value, dom: Domain, probes: ProbeSet) -> Comparison:
    return compare_values(lhs, rhs, dom, probes)


def probe_orientation(
    label: str,
    lhs: Term,
    rhs: Term,
    J: Interpretation,
    probes: ProbeSet,
    valuation_cap: int = 4096,
    seed: int = 0,
) -> Verdict:
    """Test lhs ≻ rhs on probe valuations of their free variables."""
    spec = J.spec
    variables = sorted(free_vars(lhs) | free_vars(rhs), key=lambda v: v.name)
    doms = [spec.domain(v.type) for v in variables]
    result_dom = spec.domain(lhs.type)
    count = 0
    for valuation in probes.argument_tuples(doms, cap=valuation_cap, seed=seed):
        alpha = dict(zip(variables, valuation))
        left = interpret_term(lhs, J, alpha)
        right = interpret_term(rhs, J, alpha)
        cmp = _compare(left, right, result_dom, probes)
        count += cmp.probes
        if not cmp.gt:
            args = tuple(cmp.witness)
            lv = apply_all(left, args) if args else left
            rv = apply_all(right, args) if args else right
            witness = Counterexample(label, lhs, rhs, tuple(alpha.items()), args, lv, rv)
            return refuted(witness, str(witness))
    return validated(count)


def orient_rule(rule: Rule, J: Interpretation, probes: ProbeSet, config: CheckConfig = CheckConfig()) -> Verdict:
    if config.symbolic:
        verdict = certify_rule(rule, J)
        if verdict.status is Status.CERTIFIED:
            return verdict
    return probe_orientation(str(rule), rule.lhs, rule.rhs, J, probes, config.valuation_cap, config.seed)


# ------------------------------------------------------------ β and η


def sample_types(sig, max_order: int = 2) -> list[SimpleType]:
    """Types of the signature up to ``max_order`` plus every sort-to-sort arrow."""
    found = {t for t in sig.types() if type_order(t) <= max_order}
    found |= {Arrow(Base(a), Base(b)) for a in sig.sorts for b in sig.sorts}
    return sorted(found, key=str)


class TermSampler:
    """Seeded random well-typed terms over a signature, by enumeration."""

    def __init__(self, sig, max_size: int = 4, seed: int = 0):
        self.sig = sig
        self.max_size = max_size
        self.rng = random.Random(seed)
        self.types = sample_types(sig)
        self.enum = ClosedTermEnumerator(sig, tuple(self.types))

    def pool(self, ty: SimpleType, ctx: tuple[SimpleType, ...] = ()) -> list[Term]:
        out: list[Term] = []
        for size in range(1, self.max_size + 1):
            out.extend(self.enum.terms(ty, size, ctx))
        return out

    def closed(self, ty: SimpleType) -> Term | None:
        pool = self.pool(ty)
        return self.rng.choice(pool) if pool else None

    def beta_triples(self, n: int) -> Iterator[tuple[Abs, Term]]:
        """``n`` pairs (λx.s, t) where s may mention x and one free variable y."""
        shapes = [(rho, sigma, tau) for rho in self.types for sigma in self.types for tau in self.types]
        self.rng.shuffle(shapes)
        produced = 0
        attempts = 0
        while produced < n and attempts < 50 * n:
            attempts += 1
            rho, sigma, tau = shapes[attempts % len(shapes)]
            bodies = self.pool(tau, (rho, sigma))
            arg = self.closed(sigma)
            if not bodies or arg is None:
                continue
            body = self.rng.choice(bodies)
            lam = instantiate(Abs(sigma, body, "x"), Var("y", rho))
            produced += 1
            yield lam, arg

    def eta_instances(self, n: int) -> Iterator[Term]:
        arrows = [t for t in self.types if isinstance(t, Arrow)]
        if not arrows:
            return
        for i in range(n):
            ty = arrows[i % len(arrows)]
            f = self.closed(ty) if i % 2 else None
            yield f if f is not None else Var("F", ty)


def check_beta(J: Interpretation, probes: ProbeSet, sampler: TermSampler, samples: int = 200, valuation_cap: int = 16) -> Verdict:
    count = 0
    for lam, arg in sampler.beta_triples(samples):
        lhs = App(lam, arg)
        rhs = instantiate(lam.body, arg)
        verdict = probe_orientation("beta", lhs, rhs, J, probes, valuation_cap)
        if verdict.status is Status.REFUTED:
            raise InternalSoundness(f"beta instance {show(lhs)} does not decrease: {verdict.note}", verdict.witness)
        count += 1
    return validated(count, f"{count} beta instances")


def check_eta(J: Interpretation, probes: ProbeSet, sampler: TermSampler, samples: int = 50, valuation_cap: int = 16) -> Verdict:
    count = 0
    for f in sampler.eta_instances(samples):
        ty = f.type
        lhs = Abs(ty.left, App(shift(f, 1), BVar(0, ty.left)), "x")
        verdict = probe_orientation("eta", lhs, f, J, probes, valuation_cap)
        if verdict.status is Status.REFUTED:
            raise InternalSoundness(f"eta instance {show(lhs)} does not decrease: {verdict.note}", verdict.witness)
        count += 1
    return validated(count, f"{count} eta instances")


# --------------------------------------------------------------- report


@dataclass
class CompatibilityReport:
    monotonicity: dict[str, tuple[Verdict, MonotonicityReport]]
    rules: list[tuple[Rule, Verdict]]
    beta: Verdict
    eta: Verdict | None
    config: CheckConfig = field(default_factory=CheckConfig)

    @property
    def verdicts(self) -> list[Verdict]:
        out = [v for v, _ in self.monotonicity.values()] + [v for _, v in self.rules] + [self.beta]
        if self.eta is not None:
            out.append(self.eta)
        return out

    @property
    def status(self) -> Status:
        return weakest(self.verdicts)

    @property
    def refutations(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.status is Status.REFUTED]


def check_system(afs: AFS, J: Interpretation, config: CheckConfig = CheckConfig()) -> CompatibilityReport:
    probes = config.probes()
    mono = {
        name: check_strongly_monotonic(name, J, probes, config.valuation_cap) for name in afs.signature
    }
    rules = [(rule, orient_rule(rule, J, probes, config)) for rule in afs.rules]
    sampler = TermSampler(afs.signature, seed=config.seed)
    beta = check_beta(J, probes, sampler, config.beta_samples)
    eta_on = afs.eta if config.eta is None else config.eta
    eta = check_eta(J, probes, sampler, config.eta_samples) if eta_on else None
    return CompatibilityReport(mono, rules, beta, eta, config)


# ------------------------------------------------- dynamic decrease


@dataclass(frozen=True)
class DecreaseViolation:
    step: RewriteStep
    before: Value
    after: Value
    comparison: Comparison

    def __str__(self) -> str:
        return (
            f"step {show(self.step.source)} -> {show(self.step.target)} ({self.step.rule}) "
            f"does not decrease: {show_value(self.comparison.left if self.comparison.left is not None else self.before)}"
            f" vs {show_value(self.comparison.right if self.comparison.right is not None else self.after)}"
        )


@dataclass(frozen=True)
class DecreaseResult:
    steps: int
    violation: DecreaseViolation | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def verify_decrease_along_reduction(
    t: Term,
    afs: AFS,
    J: Interpretation,
    fuel: int = 10_000,
    alpha: Mapping[Var | str, Value] | None = None,
    probes: ProbeSet | None = None,
) -> DecreaseResult:
    """Check ⟦s⟧ ≻ ⟦t⟧ on every step reachable from ``t``."""
    probes = probes or ProbeSet()
    cache: dict[Term, Value] = {}
    dom = J.spec.domain(t.type)

    def value(u: Term) -> Value:
        hit = cache.get(u)
        if hit is None:
            hit = cache[u] = interpret_term(u, J, alpha)
        return hit

    count = 0
    for step in reachable_steps(t, afs, fuel):
        before, after = value(step.source), value(step.target)
        cmp = compare_values(before, after, dom, probes)
        count += 1
        if not cmp.gt:
            return DecreaseResult(count, DecreaseViolation(step, before, after, cmp))
    return DecreaseResult(count)


__all__ = [
    "CheckConfig",
    "CompatibilityReport",
    "Counterexample",
    "DecreaseResult",
    "DecreaseViolation",
    "FuelExhausted",
    "InternalSoundness",
    "TermSampler",
    "UnboundVariable",
    "certify_rule",
    "check_beta",
    "check_eta",
    "check_system",
    "interpret_term",
    "orient_rule",
    "probe_orientation",
    "symbolic_certify",
    "verify_decrease_along_reduction",
]
