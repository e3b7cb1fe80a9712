"""Simple types, signatures and typed higher-order terms.

Terms are stored locally nameless: free variables are named ``Var`` nodes,
bound variables are de Bruijn indices (``BVar``).  Binder names survive only
as printing hints, so structural equality of two terms is α-equivalence and
terms can be used directly as dictionary keys.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class TermError(Exception):
    """Base class for errors raised by term construction."""


class IllTyped(TermError):
    def __init__(self, message: str, position: tuple = (), expected=None, found=None):
        super().__init__(message)
        self.position = position
        self.expected = expected
        self.found = found


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    left: "SimpleType"
    right: "SimpleType"

    def __str__(self) -> str:
        left = f"({self.left})" if isinstance(self.left, Arrow) else str(self.left)
        return f"{left} => {self.right}"


SimpleType = Base | Arrow


def arrow(*types: SimpleType) -> SimpleType:
    """Right-associated arrow: ``arrow(a, b, c)`` is ``a => (b => c)``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def type_order(ty: SimpleType) -> int:
    if isinstance(ty, Base):
        return 0
    return max(type_order(ty.left) + 1, type_order(ty.right))


def split_arrow(ty: SimpleType) -> tuple[list[SimpleType], Base]:
    """Argument types and the final sort of ``ty``."""
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.left)
        ty = ty.right
    return args, ty


def subtypes(ty: SimpleType) -> Iterator[SimpleType]:
    yield ty
    if isinstance(ty, Arrow):
        yield from subtypes(ty.left)
        yield from subtypes(ty.right)


# ----------------------------------------------------------- signatures


@dataclass(frozen=True)
class FuncDecl:
    name: str
    inputs: tuple[SimpleType, ...]
    output: SimpleType

    @property
    def arity(self) -> int:
        return len(self.inputs)

    @property
    def first_order(self) -> bool:
        return all(isinstance(t, Base) for t in self.inputs) and isinstance(self.output, Base)

    def __str__(self) -> str:
        if not self.inputs:
            return f"{self.name} : {self.output}"
        ins = " * ".join(f"({t})" if isinstance(t, Arrow) else str(t) for t in self.inputs)
        return f"{self.name} : {ins} => {self.output}"


class Signature(Mapping[str, FuncDecl]):
    """Sorts plus function declarations, looked up by symbol name."""

    def __init__(self, sorts: Iterable[str], decls: Iterable[FuncDecl]):
        self.sorts = tuple(sorts)
        self._decls: dict[str, FuncDecl] = {}
        for decl in decls:
            if decl.name in self._decls:
                raise TermError(f"symbol {decl.name!r} declared twice")
            for ty in (*decl.inputs, decl.output):
                for sub in subtypes(ty):
                    if isinstance(sub, Base) and sub.name not in self.sorts:
                        raise TermError(f"unknown sort {sub.name!r} in declaration of {decl.name!r}")
            self._decls[decl.name] = decl

    def __getitem__(self, name: str) -> FuncDecl:
        return self._decls[name]

    def __iter__(self):
        return iter(self._decls)

    def __len__(self) -> int:
        return len(self._decls)

    def types(self) -> set[SimpleType]:
        """Every type occurring (also as a subtype) in a declaration."""
        found: set[SimpleType] = {Base(s) for s in self.sorts}
        for decl in self._decls.values():
            for ty in (*decl.inputs, decl.output):
                found.update(subtypes(ty))
        return found


# ---------------------------------------------------------------- terms


def _hash_fields(*parts) -> int:
    return hash(parts)


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    ty: SimpleType
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", _hash_fields("V", self.name, self.ty))

    def __hash__(self):
        return self._hash

    @property
    def type(self) -> SimpleType:
        return self.ty

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class BVar:
    """Bound variable, referring to the ``index``-th enclosing binder."""

    index: int
    ty: SimpleType
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", _hash_fields("B", self.index, self.ty))

    def __hash__(self):
        return self._hash

    @property
    def type(self) -> SimpleType:
        return self.ty


@dataclass(frozen=True, slots=True)
class Abs:
    var_ty: SimpleType
    body: "Term"
    name: str = field(default="x", compare=False)
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    _type: SimpleType = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_hash", _hash_fields("L", self.var_ty, self.body))
        object.__setattr__(self, "_type", Arrow(self.var_ty, self.body.type))

    def __hash__(self):
        return self._hash

    @property
    def type(self) -> SimpleType:
        return self._type

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    _type: SimpleType = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        fty = self.fun.type
        if not isinstance(fty, Arrow):
            raise IllTyped(f"cannot apply a term of sort {fty}", expected="arrow type", found=fty)
        if fty.left != self.arg.type:
            raise IllTyped(
                f"argument has type {self.arg.type}, expected {fty.left}",
                expected=fty.left,
                found=self.arg.type,
            )
        object.__setattr__(self, "_hash", _hash_fields("A", self.fun, self.arg))
        object.__setattr__(self, "_type", fty.right)

    def __hash__(self):
        return self._hash

    @property
    def type(self) -> SimpleType:
        return self._type

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class FApp:
    """Functional application ``f(s1, ..., sk)`` of a declared symbol."""

    symbol: str
    args: tuple["Term", ...]
    ty: SimpleType
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", _hash_fields("F", self.symbol, self.args, self.ty))

    def __hash__(self):
        return self._hash

    @property
    def type(self) -> SimpleType:
        return self.ty

    def __str__(self) -> str:
        return show(self)


Term = Var | BVar | Abs | App | FApp
Substitution = Mapping[Var, Term]


def fapp(sig: Signature, symbol: str, *args: Term) -> FApp:
    """Build ``symbol(args)`` checking arity and argument types against ``sig``."""
    try:
        decl = sig[symbol]
    except KeyError:
        raise IllTyped(f"undeclared symbol {symbol!r}") from None
    if len(args) != decl.arity:
        raise IllTyped(f"{symbol} expects {decl.arity} arguments, got {len(args)}")
    for i, (arg, ty) in enumerate(zip(args, decl.inputs)):
        if arg.type != ty:
            raise IllTyped(
                f"argument {i + 1} of {symbol} has type {arg.type}, expected {ty}",
                position=(i,),
                expected=ty,
                found=arg.type,
            )
    return FApp(symbol, tuple(args), decl.output)


def app(fun: Term, *args: Term) -> Term:
    for arg in args:
        fun = App(fun, arg)
    return fun


def lam(var: Var, body: Term) -> Abs:
    """λvar. body, binding every free occurrence of ``var`` in ``body``."""
    return Abs(var.ty, _close(body, var, 0), var.name)


def _close(t: Term, var: Var, depth: int) -> Term:
    if isinstance(t, Var):
        return BVar(depth, t.ty) if t == var else t
    if isinstance(t, BVar):
        return t
    if isinstance(t, Abs):
        return Abs(t.var_ty, _close(t.body, var, depth + 1), t.name)
    if isinstance(t, App):
        return App(_close(t.fun, var, depth), _close(t.arg, var, depth))
    return FApp(t.symbol, tuple(_close(a, var, depth) for a in t.args), t.ty)


def open_abs(t: Abs, var: Var) -> Term:
    """The body of ``t`` with its bound variable replaced by ``var``."""
    return instantiate(t.body, var)


# ------------------------------------------------- de Bruijn operations


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Add ``amount`` to every bound index ≥ ``cutoff``."""
    if amount == 0:
        return t
    if isinstance(t, BVar):
        if t.index >= cutoff:
            if t.index + amount < 0:
                raise ValueError("negative de Bruijn index")
            return BVar(t.index + amount, t.ty)
        return t
    if isinstance(t, Var):
        return t
    if isinstance(t, Abs):
        return Abs(t.var_ty, shift(t.body, amount, cutoff + 1), t.name)
    if isinstance(t, App):
        return App(shift(t.fun, amount, cutoff), shift(t.arg, amount, cutoff))
    return FApp(t.symbol, tuple(shift(a, amount, cutoff) for a in t.args), t.ty)


def instantiate(body: Term, value: Term) -> Term:
    """``body`` with index 0 replaced by ``value`` and other loose indices lowered."""

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, BVar):
            if t.index == depth:
                return shift(value, depth)
            if t.index > depth:
                return BVar(t.index - 1, t.ty)
            return t
        if isinstance(t, Var):
            return t
        if isinstance(t, Abs):
            return Abs(t.var_ty, go(t.body, depth + 1), t.name)
        if isinstance(t, App):
            return App(go(t.fun, depth), go(t.arg, depth))
        return FApp(t.symbol, tuple(go(a, depth) for a in t.args), t.ty)

    return go(body, 0)


def loose_indices(t: Term, depth: int = 0) -> set[int]:
    """Indices of bound variables that escape ``t`` (relative to its root)."""
    if isinstance(t, BVar):
        return {t.index - depth} if t.index >= depth else set()
    if isinstance(t, Var):
        return set()
    if isinstance(t, Abs):
        return loose_indices(t.body, depth + 1)
    if isinstance(t, App):
        return loose_indices(t.fun, depth) | loose_indices(t.arg, depth)
    out: set[int] = set()
    for a in t.args:
        out |= loose_indices(a, depth)
    return out


def occurs_bound(t: Term, index: int) -> bool:
    return index in loose_indices(t)


# ------------------------------------------------------------ operations


def type_of(t: Term, sig: Signature | None = None) -> SimpleType:
    """Type of ``t``; with a signature, every symbol occurrence is re-checked."""
    if sig is not None:
        _check(t, sig, (), [])
    return t.type


def _check(t: Term, sig: Signature, pos: tuple, ctx: list[SimpleType]) -> None:
    if isinstance(t, BVar):
        if t.index >= len(ctx) or ctx[-1 - t.index] != t.ty:
            raise IllTyped("dangling or mistyped bound variable", pos)
    elif isinstance(t, Abs):
        _check(t.body, sig, pos + (0,), ctx + [t.var_ty])
    elif isinstance(t, App):
        _check(t.fun, sig, pos + (0,), ctx)
        _check(t.arg, sig, pos + (1,), ctx)
    elif isinstance(t, FApp):
        decl = sig.get(t.symbol)
        if decl is None:
            raise IllTyped(f"undeclared symbol {t.symbol!r}", pos)
        if len(t.args) != decl.arity:
            raise IllTyped(f"{t.symbol} expects {decl.arity} arguments", pos, decl.arity, len(t.args))
        if t.ty != decl.output:
            raise IllTyped(f"{t.symbol} has output type {decl.output}", pos, decl.output, t.ty)
        for i, (arg, ty) in enumerate(zip(t.args, decl.inputs)):
            _check(arg, sig, pos + (i,), ctx)
            if arg.type != ty:
                raise IllTyped(f"argument {i + 1} of {t.symbol}", pos + (i,), ty, arg.type)


def free_vars(t: Term) -> set[Var]:
    if isinstance(t, Var):
        return {t}
    if isinstance(t, BVar):
        return set()
    if isinstance(t, Abs):
        return free_vars(t.body)
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    out: set[Var] = set()
    for a in t.args:
        out |= free_vars(a)
    return out


def substitute(t: Term, g: Substitution) -> Term:
    """Capture-avoiding substitution of free variables.

    Bound variables are indices, so replacement terms can never be captured.
    Binder names that would clash with a free name of a replacement are
    renamed, keeping printed output unambiguous.
    """
    for var, value in g.items():
        if value.type != var.ty:
            raise IllTyped(f"substitution for {var.name} is not type-preserving", (), var.ty, value.type)
    if not g:
        return t
    incoming = {v.name for value in g.values() for v in free_vars(value)}

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return g.get(t, t)
        if isinstance(t, BVar):
            return t
        if isinstance(t, Abs):
            name = t.name
            if name in incoming:
                name = fresh_name(name, incoming | {v.name for v in free_vars(t.body)})
            return Abs(t.var_ty, go(t.body), name)
        if isinstance(t, App):
            return App(go(t.fun), go(t.arg))
        return FApp(t.symbol, tuple(go(a) for a in t.args), t.ty)

    return go(t)


def alpha_eq(s: Term, t: Term) -> bool:
    return s == t


def term_size(t: Term) -> int:
    if isinstance(t, (Var, BVar)):
        return 1
    if isinstance(t, Abs):
        return 1 + term_size(t.body)
    if isinstance(t, App):
        return 1 + term_size(t.fun) + term_size(t.arg)
    return 1 + sum(term_size(a) for a in t.args)


def symbols(t: Term) -> set[str]:
    if isinstance(t, (Var, BVar)):
        return set()
    if isinstance(t, Abs):
        return symbols(t.body)
    if isinstance(t, App):
        return symbols(t.fun) | symbols(t.arg)
    out = {t.symbol}
    for a in t.args:
        out |= symbols(a)
    return out


def subterm_at(t: Term, position: tuple[int, ...]) -> Term:
    for i in position:
        if isinstance(t, Abs):
            t = t.body
        elif isinstance(t, App):
            t = (t.fun, t.arg)[i]
        elif isinstance(t, FApp):
            t = t.args[i]
        else:
            raise IndexError(position)
    return t


def replace_at(t: Term, position: tuple[int, ...], new: Term) -> Term:
    if not position:
        return new
    i, rest = position[0], position[1:]
    if isinstance(t, Abs):
        return Abs(t.var_ty, replace_at(t.body, rest, new), t.name)
    if isinstance(t, App):
        if i == 0:
            return App(replace_at(t.fun, rest, new), t.arg)
        return App(t.fun, replace_at(t.arg, rest, new))
    if isinstance(t, FApp):
        args = list(t.args)
        args[i] = replace_at(args[i], rest, new)
        return FApp(t.symbol, tuple(args), t.ty)
    raise IndexError(position)


# -------------------------------------------------------------- printing


def fresh_name(base: str, taken: set[str]) -> str:
    """First of ``base``, ``base1``, ``base2``, ... not in ``taken``."""
    stem = base.rstrip("0123456789") or base
    if base not in taken:
        return base
    for i in itertools.count(1):
        candidate = f"{stem}{i}"
        if candidate not in taken:
            return candidate
    raise AssertionError("unreachable")


def show(t: Term) -> str:
    """Concrete syntax accepted by the term parser."""
    free = {v.name for v in free_vars(t)}
    return _show(t, [], free, top=True)


def _show(t: Term, names: list[str], free: set[str], top: bool = False, head: bool = False, arg: bool = False) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, BVar):
        return names[-1 - t.index]
    if isinstance(t, FApp):
        if not t.args:
            return t.symbol
        return f"{t.symbol}(" + ", ".join(_show(a, names, free, top=True) for a in t.args) + ")"
    if isinstance(t, App):
        text = _show(t.fun, names, free, head=True) + " " + _show(t.arg, names, free, arg=True)
        return f"({text})" if arg else text
    name = fresh_name(t.name, free | set(names))
    text = f"\\{name}:{_show_type(t.var_ty)}. " + _show(t.body, names + [name], free, top=True)
    return text if top else f"({text})"


def _show_type(ty: SimpleType) -> str:
    return f"({ty})" if isinstance(ty, Arrow) else str(ty)
