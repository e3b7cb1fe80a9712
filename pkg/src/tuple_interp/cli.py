"""Command line front end: check, eval, dht, classify and rc-table."""

from __future__ import annotations

import argparse
import shlex
import sys
import time
from pathlib import Path
from typing import Sequence, TextIO

from .algebra import show_value
from .checker import CheckConfig, UnboundVariable, check_system, interpret_term
from .complexity import RCKind, classify_symbols, empirical_rc, runtime_class, shapes
from .interp import InterpTypeError
from .problem import CORPUS, Problem, ProblemError, load_corpus, load_file
from .rewriting import FuelExhausted, derivation_height
from .terms import TermError, free_vars, show
from .verdicts import Status, Verdict

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FUEL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load(spec: str) -> Problem:
    """A problem file path, or the name of a bundled corpus system."""
    path = Path(spec)
    if path.is_file():
        return load_file(path)
    if spec in CORPUS:
        return load_corpus(spec)
    raise UsageError(f"no such problem file or corpus system: {spec}")


def parse_grid(text: str) -> tuple[int, ...]:
    try:
        grid = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated naturals: {text!r}") from None
    if not grid or min(grid) < 0:
        raise argparse.ArgumentTypeError("grid must be a nonempty list of naturals")
    return grid


def _record(out: TextIO, **fields) -> None:
    out.write(" ".join(f"{k}={shlex.quote(str(v))}" for k, v in fields.items()) + "\n")


def _verdict_fields(v: Verdict) -> dict:
    fields = {"status": v.status.value}
    if v.status is Status.VALIDATED:
        fields["probes"] = v.probes
    if v.status is Status.REFUTED and v.witness is not None:
        fields["witness"] = v.witness
    return fields


def _config(args, problem: Problem) -> CheckConfig:
    eta = None if args.eta is None else args.eta == "on"
    grid = args.grid
    if grid is None and "grid" in problem.options:
        grid = parse_grid(problem.options["grid"])
    probe_cap = args.probe_cap or int(problem.options.get("probe_cap", 64))
    valuation_cap = args.valuation_cap or int(problem.options.get("valuation_cap", 4096))
    return CheckConfig(
        grid=grid or (0, 1, 2, 3),
        probe_cap=probe_cap,
        valuation_cap=valuation_cap,
        seed=args.seed,
        eta=eta,
    )


# ------------------------------------------------------------ commands


def cmd_check(args, out: TextIO) -> int:
    problem = load(args.file)
    config = _config(args, problem)
    started = time.perf_counter()
    report = check_system(problem.afs, problem.interpretation, config)
    elapsed = time.perf_counter() - started
    rc = runtime_class(problem.afs, problem.interpretation)
    machine = args.format == "machine"
    if machine:
        for name, (verdict, _) in report.monotonicity.items():
            _record(out, kind="monotonicity", symbol=name, **_verdict_fields(verdict))
        for i, (rule, verdict) in enumerate(report.rules, 1):
            _record(out, kind="rule", index=i, rule=rule, **_verdict_fields(verdict))
        _record(out, kind="beta", **_verdict_fields(report.beta))
        if report.eta is not None:
            _record(out, kind="eta", **_verdict_fields(report.eta))
        _record(out, kind="runtime_class", value=rc.kind.value, degree_estimate=rc.degree if rc.degree is not None else "none")
        _record(out, kind="summary", status=report.status.value)
    else:
        out.write(f"system {problem.name or args.file}\n")
        out.write("strong monotonicity:\n")
        for name, (verdict, _) in report.monotonicity.items():
            out.write(f"  {name}: {verdict}\n")
        out.write("rules:\n")
        for i, (rule, verdict) in enumerate(report.rules, 1):
            out.write(f"  [{i}] {rule}: {verdict}\n")
        out.write(f"beta: {report.beta}\n")
        if report.eta is not None:
            out.write(f"eta: {report.eta}\n")
        out.write(f"runtime complexity: {rc}\n")
        out.write(f"overall: {report.status.value} ({elapsed:.2f}s)\n")
    return EXIT_OK if report.status.ok else EXIT_FAIL


def parse_valuation(problem: Problem, text: str, types: dict) -> dict:
    values = {}
    for item in filter(str.strip, text.split(";")):
        name, sep, expr = item.partition("=")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"valuation entries look like name=expression, got {item.strip()!r}")
        if name not in types:
            raise UsageError(f"valuation for {name!r}, which is not a free variable of the term")
        try:
            values[name] = problem.value(expr.strip(), types[name])
        except InterpTypeError as exc:
            raise UsageError(f"bad value for {name}: {exc}") from None
    return values


def cmd_eval(args, out: TextIO) -> int:
    problem = load(args.file)
    term = problem.term(args.term)
    types = {v.name: v.type for v in free_vars(term)}
    alpha = parse_valuation(problem, args.valuation or "", types)
    missing = sorted(set(types) - set(alpha))
    if missing:
        raise UsageError(f"no value given for free variable(s) {', '.join(missing)}")
    value = interpret_term(term, problem.interpretation, alpha)
    if args.format == "machine":
        _record(out, term=show(term), value=show_value(value))
    else:
        out.write(f"[[{show(term)}]] = {show_value(value)}\n")
    return EXIT_OK


def cmd_dht(args, out: TextIO) -> int:
    problem = load(args.file)
    term = problem.term(args.term)
    if free_vars(term):
        raise UsageError("dht needs a closed term")
    height = derivation_height(term, problem.afs, args.fuel)
    if args.format == "machine":
        _record(out, term=show(term), dht=height)
    else:
        out.write(f"{height}\n")
    return EXIT_OK


def cmd_classify(args, out: TextIO) -> int:
    problem = load(args.file)
    afs, J = problem.afs, problem.interpretation
    rc = runtime_class(afs, J)
    kind = rc.kind.value
    degree = rc.degree if rc.kind is RCKind.POLYNOMIAL else None
    if args.format == "machine":
        if degree is not None:
            out.write(f"runtime_class={kind} degree_estimate={degree}\n")
        else:
            out.write(f"runtime_class={kind}\n")
        return EXIT_OK
    cls = classify_symbols(afs)
    found = shapes(afs, J)
    out.write("constructors: " + ", ".join(sorted(cls.constructors)) + "\n")
    out.write("analyzed: " + ", ".join(sorted(cls.analyzed)) + "\n")
    if cls.higher_order:
        out.write("higher-order (excluded): " + ", ".join(sorted(cls.higher_order)) + "\n")
    for name, shape in found.items():
        out.write(f"  {name}: {shape}\n")
    out.write(f"runtime_class={kind}" + (f" degree_estimate={degree}" if degree is not None else "") + "\n")
    return EXIT_OK


def cmd_rc_table(args, out: TextIO) -> int:
    problem = load(args.file)
    table = empirical_rc(problem.afs, problem.interpretation, args.max_size, args.fuel)
    out.write(table.to_csv())
    return EXIT_OK if table.consistent else EXIT_FAIL


# -------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=parse_grid, default=None, help="probe grid, e.g. 0,1,2,3")
    common.add_argument("--probe-cap", type=int, default=None, help="probes per domain (default 64)")
    common.add_argument("--valuation-cap", type=int, default=None, help="valuations per rule (default 4096)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--eta", choices=("on", "off"), default=None)
    common.add_argument("--format", choices=("human", "machine"), default="human")

    parser = argparse.ArgumentParser(prog="tuple-interp", description="Tuple interpretations for higher-order rewriting.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check compatibility of rules and interpretation")
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("eval", parents=[common], help="evaluate the interpretation of a term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--valuation", default=None, help='e.g. "x=<1,2>; F=\\d. addcost(1, d)"')
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("dht", parents=[common], help="derivation height by exhaustive search")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--fuel", type=int, default=100_000)
    p.set_defaults(run=cmd_dht)

    p = sub.add_parser("classify", parents=[common], help="runtime complexity class from the interpretation")
    p.add_argument("file")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("rc-table", parents=[common], help="observed vs predicted runtime on basic terms")
    p.add_argument("file")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--fuel", type=int, default=1_000_000)
    p.set_defaults(run=cmd_rc_table)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.run(args, out)
    except FuelExhausted as exc:
        err.write(f"fuel exhausted: {exc}\n")
        return EXIT_FUEL
    except (UsageError, ProblemError, InterpTypeError, TermError, UnboundVariable) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
