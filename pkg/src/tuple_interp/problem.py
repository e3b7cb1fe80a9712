"""Problem files: sorts, signature, rules, interpretations and options.

Parsing is purely syntactic and round-trips through :func:`show_problem`.
:func:`build_problem` resolves names, infers rule-variable types from their
first use and type checks every interpretation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .algebra import TupleSpec, Value
from .interp import (
    AddCost,
    BinOp,
    Call,
    Compiler,
    CostOf,
    Div,
    IExpr,
    InterpDef,
    Interpretation,
    InterpTypeError,
    Iter,
    Lam,
    Lit,
    Null,
    Proj,
    Ref,
    Scope,
    TupleE,
    show_expr,
)
from .rewriting import AFS, Rule, RuleError, validate_rule
from .terms import (
    Abs,
    App,
    Arrow,
    Base,
    BVar,
    FApp,
    FuncDecl,
    Signature,
    SimpleType,
    Term,
    TermError,
    Var,
)


class ProblemError(Exception):
    """An error tied to an offset in the problem text."""

    def __init__(self, message: str, pos: int = -1, text: str | None = None):
        self.pos = pos
        self.line, self.column = _line_col(text, pos) if text is not None and pos >= 0 else (0, 0)
        where = f"line {self.line}, column {self.column}: " if self.line else ""
        super().__init__(where + message)
        self.message = message


class ProblemSyntaxError(ProblemError, SyntaxError):
    pass


class UnknownSymbol(ProblemError):
    pass


class DuplicateDecl(ProblemError):
    pass


class ProblemTypeError(ProblemError):
    pass


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


# ----------------------------------------------------------------- lexer


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NAT, a punctuation string, or EOF
    text: str
    pos: int
    spaced: bool  # preceded by whitespace


_TOKEN = re.compile(
    r"(?P<ws>\s+|#[^\n]*)"
    r"|(?P<NAT>\d+)"
    r"|(?P<NAME>[^\W\d]\w*'*)"
    r"|(?P<punct>=>|->|[()<>,;:*.\\+/=])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    spaced = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ProblemSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind == "ws":
            spaced = True
        else:
            tok_kind = m.group() if kind == "punct" else kind
            tokens.append(Token(tok_kind, m.group(), pos, spaced))
            spaced = False
        pos = m.end()
    tokens.append(Token("EOF", "", len(text), True))
    return tokens


# --------------------------------------------------------- raw syntax


def _pos():
    return field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class RName:
    name: str
    pos: int = _pos()


@dataclass(frozen=True)
class RCall:
    name: str
    args: tuple["RawTerm", ...]
    pos: int = _pos()


@dataclass(frozen=True)
class RLam:
    var: str
    ty: SimpleType
    body: "RawTerm"
    pos: int = _pos()


@dataclass(frozen=True)
class RApp:
    fun: "RawTerm"
    arg: "RawTerm"
    pos: int = _pos()


RawTerm = RName | RCall | RLam | RApp


@dataclass(frozen=True)
class SortDecl:
    name: str
    size: int
    pos: int = _pos()

    def __str__(self) -> str:
        return f"sort {self.name} {self.size}"


@dataclass(frozen=True)
class FunDecl:
    name: str
    inputs: tuple[SimpleType, ...]
    output: SimpleType
    pos: int = _pos()

    def __str__(self) -> str:
        return "fun " + str(FuncDecl(self.name, self.inputs, self.output))


@dataclass(frozen=True)
class RuleDecl:
    lhs: RawTerm
    rhs: RawTerm
    pos: int = _pos()

    def __str__(self) -> str:
        return f"rule {show_raw(self.lhs)} -> {show_raw(self.rhs)}"


@dataclass(frozen=True)
class InterpDecl:
    name: str
    params: tuple[str, ...]
    body: IExpr
    pos: int = _pos()

    def __str__(self) -> str:
        return f"interp {self.name}({', '.join(self.params)}) = {show_expr(self.body)}"


@dataclass(frozen=True)
class OptionDecl:
    name: str
    value: str
    pos: int = _pos()

    def __str__(self) -> str:
        return f"option {self.name} {self.value}"


Decl = SortDecl | FunDecl | RuleDecl | InterpDecl | OptionDecl


@dataclass(frozen=True)
class ProblemFile:
    decls: tuple[Decl, ...]
    text: str = field(default="", compare=False, repr=False)

    def of(self, kind) -> list:
        return [d for d in self.decls if isinstance(d, kind)]


def show_raw(t: RawTerm, head: bool = False, arg: bool = False) -> str:
    if isinstance(t, RName):
        return t.name
    if isinstance(t, RCall):
        return f"{t.name}(" + ", ".join(show_raw(a) for a in t.args) + ")"
    if isinstance(t, RApp):
        text = show_raw(t.fun, head=True) + " " + show_raw(t.arg, arg=True)
        return f"({text})" if arg else text
    ty = f"({t.ty})" if isinstance(t.ty, Arrow) else str(t.ty)
    text = f"\\{t.var}:{ty}. {show_raw(t.body)}"
    return f"({text})" if head or arg else text


def show_problem(problem: ProblemFile) -> str:
    return "".join(f"{d};\n" for d in problem.decls)


# ---------------------------------------------------------------- parser

_KEYWORDS = {"max", "min", "iter", "null", "costof", "addcost"}


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    # helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None) -> ProblemSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return ProblemSyntaxError(f"{message}, found {found}", tok.pos, self.text)

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.accept(kind)
        if tok is None:
            raise self.error(f"expected {what or repr(kind)}")
        return tok

    def name(self, what: str = "a name", allow_nat: bool = False) -> Token:
        if self.tok.kind == "NAME" or (allow_nat and self.tok.kind == "NAT"):
            return self.accept(self.tok.kind)
        raise self.error(f"expected {what}")

    def nat(self) -> int:
        return int(self.expect("NAT", "a natural number").text)

    def end(self) -> None:
        if self.tok.kind != "EOF":
            raise self.error("unexpected trailing input")

    # file
    def problem(self) -> ProblemFile:
        decls: list[Decl] = []
        seen: dict[tuple[str, str], int] = {}
        while self.tok.kind != "EOF":
            decl = self.decl()
            key = None
            if isinstance(decl, SortDecl):
                key = ("sort", decl.name)
            elif isinstance(decl, FunDecl):
                key = ("fun", decl.name)
            elif isinstance(decl, InterpDecl):
                key = ("interp", decl.name)
            elif isinstance(decl, OptionDecl):
                key = ("option", decl.name)
            if key is not None:
                if key in seen:
                    raise DuplicateDecl(f"{key[0]} {key[1]!r} declared twice", decl.pos, self.text)
                seen[key] = decl.pos
            decls.append(decl)
            self.expect(";", "';' after declaration")
        if not decls:
            raise self.error("expected at least one declaration")
        return ProblemFile(tuple(decls), self.text)

    def decl(self) -> Decl:
        tok = self.name("a declaration keyword")
        if tok.text == "sort":
            name = self.name("a sort name")
            return SortDecl(name.text, self.nat(), tok.pos)
        if tok.text == "fun":
            name = self.name("a symbol name", allow_nat=True)
            self.expect(":")
            inputs, output = self.typesig()
            return FunDecl(name.text, inputs, output, tok.pos)
        if tok.text == "rule":
            lhs = self.term()
            self.expect("->", "'->'")
            return RuleDecl(lhs, self.term(), tok.pos)
        if tok.text == "interp":
            name = self.name("a symbol name", allow_nat=True)
            self.expect("(")
            params = []
            if not self.accept(")"):
                params.append(self.name("a parameter name").text)
                while self.accept(","):
                    params.append(self.name("a parameter name").text)
                self.expect(")")
            self.expect("=")
            return InterpDecl(name.text, tuple(params), self.iexpr(), tok.pos)
        if tok.text == "option":
            name = self.name("an option name")
            return OptionDecl(name.text, self.option_value(), tok.pos)
        raise self.error("expected sort, fun, rule, interp or option", tok)

    def option_value(self) -> str:
        if self.tok.kind == "NAME":
            return self.accept("NAME").text
        parts = [str(self.nat())]
        while self.accept(","):
            parts.append(str(self.nat()))
        return ",".join(parts)

    # types
    def type(self) -> SimpleType:
        left = self.type_atom()
        if self.accept("=>"):
            return Arrow(left, self.type())
        return left

    def type_atom(self) -> SimpleType:
        if self.accept("("):
            ty = self.type()
            self.expect(")")
            return ty
        return Base(self.name("a type").text)

    def typesig(self) -> tuple[tuple[SimpleType, ...], SimpleType]:
        atoms = [self.type_atom()]
        while self.accept("*"):
            atoms.append(self.type_atom())
        if self.accept("=>"):
            return tuple(atoms), self.type()
        if len(atoms) > 1:
            raise self.error("expected '=>' after input types")
        return (), atoms[0]

    # terms
    def _starts_atom(self) -> bool:
        return self.tok.kind in ("NAME", "NAT", "(", "\\")

    def term(self) -> RawTerm:
        result = self.term_atom()
        while self._starts_atom():
            start = self.tok.pos
            result = RApp(result, self.term_atom(), start)
        return result

    def term_atom(self) -> RawTerm:
        tok = self.tok
        if self.accept("\\"):
            var = self.name("a bound variable")
            self.expect(":", "':' and a type")
            ty = self.type()
            self.expect(".", "'.'")
            return RLam(var.text, ty, self.term(), tok.pos)
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        name = self.name("a term", allow_nat=True)
        if self.tok.kind == "(" and not self.tok.spaced:
            self.accept("(")
            args = [self.term()]
            while self.accept(","):
                args.append(self.term())
            self.expect(")", "')' or ','")
            return RCall(name.text, tuple(args), name.pos)
        return RName(name.text, name.pos)

    # interpretation expressions
    def iexpr(self) -> IExpr:
        if self.tok.kind == "\\":
            tok = self.accept("\\")
            param = self.name("a parameter name")
            self.expect(".", "'.'")
            return Lam(param.text, self.iexpr(), tok.pos)
        left = self.iproduct()
        while self.tok.kind == "+":
            tok = self.accept("+")
            left = BinOp("+", left, self.iproduct(), tok.pos)
        return left

    def iproduct(self) -> IExpr:
        left = self.ipostfix()
        while self.tok.kind in ("*", "/"):
            tok = self.accept(self.tok.kind)
            if tok.kind == "*":
                left = BinOp("*", left, self.ipostfix(), tok.pos)
            else:
                divisor = self.nat()
                if divisor == 0:
                    raise ProblemSyntaxError("division by zero", tok.pos, self.text)
                left = Div(left, divisor, tok.pos)
        return left

    def ipostfix(self) -> IExpr:
        expr = self.iprimary()
        while True:
            if self.tok.kind == ".":
                tok = self.accept(".")
                expr = Proj(expr, self.nat(), tok.pos)
            elif self.tok.kind == "(":
                tok = self.accept("(")
                args = self.iargs()
                expr = Call(expr, tuple(args), tok.pos)
            else:
                return expr

    def iargs(self) -> list[IExpr]:
        args = [self.iexpr()]
        while self.accept(","):
            args.append(self.iexpr())
        self.expect(")", "')' or ','")
        return args

    def iprimary(self) -> IExpr:
        tok = self.tok
        if self.accept("NAT"):
            return Lit(int(tok.text), tok.pos)
        if self.accept("<"):
            items = [self.iexpr()]
            while self.accept(","):
                items.append(self.iexpr())
            self.expect(">", "'>' or ','")
            return TupleE(tuple(items), tok.pos)
        if self.accept("("):
            inner = self.iexpr()
            self.expect(")")
            return inner
        if self.tok.kind == "\\":
            return self.iexpr()
        name = self.name("an expression")
        if name.text in _KEYWORDS and self.tok.kind == "(":
            self.accept("(")
            if name.text == "null":
                ty = self.type()
                self.expect(")")
                return Null(ty, tok.pos)
            args = self.iargs()
            arity = {"max": 2, "min": 2, "iter": 3, "costof": 1, "addcost": 2}[name.text]
            if len(args) != arity:
                raise ProblemSyntaxError(f"{name.text} takes {arity} arguments", tok.pos, self.text)
            if name.text in ("max", "min"):
                return BinOp(name.text, args[0], args[1], tok.pos)
            if name.text == "iter":
                return Iter(*args, pos=tok.pos)
            if name.text == "costof":
                return CostOf(args[0], tok.pos)
            return AddCost(args[0], args[1], tok.pos)
        return Ref(name.text, tok.pos)


def parse_problem(text: str) -> ProblemFile:
    parser = Parser(text)
    return parser.problem()


def parse_raw_term(text: str) -> RawTerm:
    parser = Parser(text)
    term = parser.term()
    parser.end()
    return term


def parse_iexpr(text: str) -> IExpr:
    parser = Parser(text)
    expr = parser.iexpr()
    parser.end()
    return expr


def parse_type(text: str) -> SimpleType:
    parser = Parser(text)
    ty = parser.type()
    parser.end()
    return ty


# ----------------------------------------------------------- elaboration


class _NeedType(Exception):
    def __init__(self, node):
        self.node = node


class Elaborator:
    """Resolves raw terms against a signature; new variables get their type at first use."""

    def __init__(self, sig: Signature, text: str = "", variables: dict[str, Var] | None = None, allow_new: bool = True):
        self.sig = sig
        self.text = text
        self.variables = {} if variables is None else variables
        self.allow_new = allow_new

    def fail(self, cls, message: str, node) -> ProblemError:
        return cls(message, getattr(node, "pos", -1), self.text or None)

    def check_type(self, ty: SimpleType, node) -> SimpleType:
        if isinstance(ty, Base):
            if ty.name not in self.sig.sorts:
                raise self.fail(UnknownSymbol, f"unknown sort {ty.name!r}", node)
        else:
            self.check_type(ty.left, node)
            self.check_type(ty.right, node)
        return ty

    def elaborate(self, raw: RawTerm, expected: SimpleType | None = None) -> Term:
        try:
            return self._term(raw, expected, [])
        except _NeedType as exc:
            raise self.fail(ProblemTypeError, "cannot infer the type of this variable", exc.node) from None

    def _expect(self, t: Term, expected: SimpleType | None, node) -> Term:
        if expected is not None and t.type != expected:
            raise self.fail(ProblemTypeError, f"term has type {t.type}, expected {expected}", node)
        return t

    def _term(self, raw: RawTerm, expected: SimpleType | None, bound: list[tuple[str, SimpleType]]) -> Term:
        if isinstance(raw, RName):
            for depth, (name, ty) in enumerate(reversed(bound)):
                if name == raw.name:
                    return self._expect(BVar(depth, ty), expected, raw)
            decl = self.sig.get(raw.name)
            if decl is not None:
                if decl.arity:
                    raise self.fail(ProblemTypeError, f"{raw.name} expects {decl.arity} arguments", raw)
                return self._expect(FApp(raw.name, (), decl.output), expected, raw)
            var = self.variables.get(raw.name)
            if var is None:
                if not self.allow_new or raw.name.isdigit():
                    raise self.fail(UnknownSymbol, f"unknown symbol {raw.name!r}", raw)
                if expected is None:
                    raise _NeedType(raw)
                var = Var(raw.name, expected)
                self.variables[raw.name] = var
            return self._expect(var, expected, raw)
        if isinstance(raw, RCall):
            decl = self.sig.get(raw.name)
            if decl is None:
                raise self.fail(UnknownSymbol, f"unknown function symbol {raw.name!r}", raw)
            if len(raw.args) != decl.arity:
                raise self.fail(
                    ProblemTypeError, f"{raw.name} expects {decl.arity} arguments, got {len(raw.args)}", raw
                )
            args = tuple(self._term(a, ty, bound) for a, ty in zip(raw.args, decl.inputs))
            return self._expect(FApp(raw.name, args, decl.output), expected, raw)
        if isinstance(raw, RLam):
            ty = self.check_type(raw.ty, raw)
            if expected is not None and not (isinstance(expected, Arrow) and expected.left == ty):
                raise self.fail(ProblemTypeError, f"abstraction over {ty} where {expected} is expected", raw)
            body_expected = expected.right if expected is not None else None
            body = self._term(raw.body, body_expected, bound + [(raw.var, ty)])
            return Abs(ty, body, raw.var)
        try:
            fun = self._term(raw.fun, None, bound)
        except _NeedType:
            arg = self._term(raw.arg, None, bound)
            if expected is None:
                raise
            fun = self._term(raw.fun, Arrow(arg.type, expected), bound)
            return App(fun, arg)
        if not isinstance(fun.type, Arrow):
            raise self.fail(ProblemTypeError, f"cannot apply a term of sort {fun.type}", raw)
        arg = self._term(raw.arg, fun.type.left, bound)
        return self._expect(App(fun, arg), expected, raw)


# -------------------------------------------------------------- problems


@dataclass
class Problem:
    afs: AFS
    interpretation: Interpretation
    spec: TupleSpec
    options: dict[str, str]
    source: ProblemFile
    name: str = ""

    @property
    def signature(self) -> Signature:
        return self.afs.signature

    def term(self, text: str, variables: Mapping[str, SimpleType] | None = None) -> Term:
        """Parse a term over this problem's signature."""
        elab = Elaborator(
            self.signature,
            text,
            {n: Var(n, t) for n, t in (variables or {}).items()},
            allow_new=True,
        )
        return elab.elaborate(parse_raw_term(text))

    def value(self, text: str, ty: SimpleType) -> Value:
        """Evaluate a closed interpretation expression at the domain of ``ty``."""
        expr = parse_iexpr(text)
        dom = self.spec.domain(ty)
        try:
            _, fn = Compiler(self.spec).compile(expr, Scope(), dom)
        except InterpTypeError as exc:
            raise ProblemTypeError(str(exc), exc.pos, text) from None
        return fn(())


def build_problem(source: ProblemFile, name: str = "") -> Problem:
    text = source.text
    sizes: dict[str, int] = {}
    decls: list[FuncDecl] = []
    defs: dict[str, InterpDef] = {}
    options: dict[str, str] = {}
    for d in source.of(SortDecl):
        if d.size < 1:
            raise ProblemTypeError(f"sort {d.name} needs at least one component", d.pos, text)
        sizes[d.name] = d.size
    for d in source.of(FunDecl):
        for ty in (*d.inputs, d.output):
            _check_sorts(ty, sizes, d.pos, text)
        decls.append(FuncDecl(d.name, d.inputs, d.output))
    sig = Signature(sizes, decls)
    rules = []
    for d in source.of(RuleDecl):
        elab = Elaborator(sig, text)
        lhs = elab.elaborate(d.lhs)
        rhs = elab.elaborate(d.rhs, lhs.type)
        rule = Rule(lhs, rhs)
        try:
            validate_rule(rule, sig)
        except (RuleError, TermError) as exc:
            raise ProblemTypeError(f"invalid rule {rule}: {exc}", d.pos, text) from None
        rules.append(rule)
    for d in source.of(InterpDecl):
        if d.name not in sig:
            raise UnknownSymbol(f"interpretation for undeclared symbol {d.name!r}", d.pos, text)
        defs[d.name] = InterpDef(d.name, d.params, d.body)
    for d in source.of(OptionDecl):
        options[d.name] = d.value
    eta = options.get("eta", "off")
    if eta not in ("on", "off"):
        raise ProblemTypeError("option eta must be on or off", -1, text)
    spec = TupleSpec(sizes)
    try:
        interpretation = Interpretation(sig, spec, defs)
    except InterpTypeError as exc:
        pos = exc.pos
        raise ProblemTypeError(str(exc), pos, text) from None
    return Problem(AFS(sig, tuple(rules), eta == "on"), interpretation, spec, options, source, name)


def _check_sorts(ty: SimpleType, sizes: Mapping[str, int], pos: int, text: str) -> None:
    if isinstance(ty, Base):
        if ty.name not in sizes:
            raise UnknownSymbol(f"unknown sort {ty.name!r}", pos, text)
    else:
        _check_sorts(ty.left, sizes, pos, text)
        _check_sorts(ty.right, sizes, pos, text)


def load_problem(text: str, name: str = "") -> Problem:
    return build_problem(parse_problem(text), name)


def load_file(path: str | Path) -> Problem:
    path = Path(path)
    return load_problem(path.read_text(encoding="utf-8"), path.stem)


CORPUS = ("ab", "rev_append", "quot_minus", "map", "foldl", "sum_foldl", "extrec", "filter", "deriv")


def corpus_text(name: str) -> str:
    return resources.files("tuple_interp").joinpath("corpus", f"{name}.afs").read_text(encoding="utf-8")


def load_corpus(name: str) -> Problem:
    return load_problem(corpus_text(name), name)


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("tuple_interp").joinpath("corpus", f"{name}.afs")))
