"""The ``fomega`` command.

Exit codes: 0 success, 1 a check failed, 2 usage error (bad flags, missing
files). With ``--json`` every command prints one report object
``{command, ok, diagnostics, stats, result}``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from dataclasses import dataclass, field

from ..derivations.check import Mode, check
from ..derivations.judgments import PreconditionError
from ..engine.canonical import DEFAULT_FUEL, kind_synth
from ..engine.harness import safety_harness
from ..engine.terms import Stuck, Value, cbv_eval
from ..normalizer import nf_ctx, nf_type
from ..reduction import FuelExhausted, beta_reduce
from ..simple import shape_context, simple_kind_synth
from ..syntax import SArr, Star
from .. import sk as SK
from .decls import Diagnostic, check_decls
from .drv import DrvError, read_derivation, write_derivation
from .pretty import Names, show_term, show_type
from .surface import ParseError, TermDef, TypeDef, parse, parse_type

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    command: str
    ok: bool = True
    diagnostics: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    fuel_used: int = 0
    steps: int = 0
    lines: list = field(default_factory=list)
    result: object = None

    def fail(self, path: str, rule: str, message: str) -> "Outcome":
        self.ok = False
        self.diagnostics.append(Diagnostic(path, rule, message))
        return self

    def report(self) -> dict:
        return {
            "command": self.command,
            "ok": self.ok,
            "diagnostics": [d.as_dict() for d in self.diagnostics],
            "stats": {"fuel_used": self.fuel_used, "steps": self.steps},
            "result": self.result,
        }


def default_fuel() -> int:
    raw = os.environ.get("FOMEGA_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        fuel = int(raw)
    except ValueError:
        raise UsageError(f"FOMEGA_FUEL must be an integer, got {raw!r}") from None
    if fuel < 0:
        raise UsageError("FOMEGA_FUEL must be nonnegative")
    return fuel


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str, out: Outcome):
    try:
        return parse(_read(path))
    except ParseError as e:
        out.fail(f"{path}:{e.line}:{e.col}", "parse", e.message)
        return None


def _show_shape(s) -> str:
    if isinstance(s, Star):
        return "*"
    if isinstance(s, SArr):
        dom = _show_shape(s.dom)
        return f"{dom if isinstance(s.dom, Star) else '(' + dom + ')'} -> {_show_shape(s.cod)}"
    return str(s)


# ---------------------------------------------------------------- commands


def cmd_check(args, out: Outcome) -> None:
    decls = _load(args.file, out)
    if decls is None:
        return
    rep = check_decls(decls, args.fuel)
    out.fuel_used = rep.fuel_used
    for w in rep.warnings:
        out.lines.append(f"warning: {w}")
    out.warnings = list(rep.warnings)
    out.diagnostics += rep.errors + rep.warnings
    out.ok = rep.ok
    out.result = {"items": len(decls.items), "warnings": len(rep.warnings)}
    if rep.ok:
        out.lines.append(f"ok: {len(decls.items)} declarations")


def cmd_nf(args, out: Outcome) -> None:
    decls = _load(args.file, out)
    if decls is None:
        return
    item = decls.find(args.expr)
    if isinstance(item, TermDef):
        raise UsageError(f"{args.expr} is a term definition; nf works on types")
    if isinstance(item, TypeDef) and item.body is not None:
        i = decls.index_of(item)
        ctx, a = decls.context_before(i), item.body
        names = Names((n, "type") for n in decls.names_before(i))
    else:
        ctx = decls.context()
        names = Names((n, "type") for n in decls.names_before(len(decls.items)))
        try:
            a = parse_type(args.expr, decls.scope())
        except ParseError as e:
            out.fail(f"--expr:{e.line}:{e.col}", "parse", e.message)
            return
    nctx = nf_ctx(ctx)
    if not args.raw:
        if kind_synth(nctx, nf_type(nctx, a), args.fuel) is None:
            out.fail(args.expr, "kinding", "the expression is not well-kinded (use --raw to skip)")
            return
    if args.via_beta:
        r = beta_reduce(a, args.fuel)
        if isinstance(r, FuelExhausted):
            out.steps = r.steps
            out.fail(args.expr, "beta", f"no normal form within {args.fuel} steps")
            return
        v, out.steps = r
    else:
        v = nf_type(nctx, a)
    text = show_type(v, names)
    out.lines.append(text)
    out.result = {"normal_form": text}
    if args.show_shape:
        s = simple_kind_synth(shape_context(nctx), nf_type(nctx, a))
        shape = "none (not simply kinded)" if s is None else _show_shape(s)
        out.lines.append(f"shape: {shape}")
        out.result["shape"] = shape


def cmd_eval(args, out: Outcome) -> None:
    decls = _load(args.file, out)
    if decls is None:
        return
    item = decls.find(args.main)
    if not isinstance(item, TermDef):
        raise UsageError(f"no term definition named {args.main}")
    i = decls.index_of(item)
    names = Names((n, "type") for n in decls.names_before(i))
    r = cbv_eval(item.term, args.fuel)
    out.steps = r.steps
    shown = show_term(r.term, names)
    if isinstance(r, Value):
        out.lines.append(shown)
        out.result = {"value": shown}
    elif isinstance(r, Stuck):
        out.fail(args.main, "stuck", f"evaluation is stuck at {shown}")
    elif isinstance(r, FuelExhausted):
        out.fail(args.main, "fuel", f"no value within {args.fuel} steps")


def cmd_derive(args, out: Outcome) -> None:
    try:
        d = read_derivation(_read(args.file))
    except DrvError as e:
        out.fail(f"{args.file}:{e.line}:{e.col}", "format", e.message)
        return
    mode = Mode.EXTENDED if args.extended else Mode.ORIGINAL
    r = check(d, mode)
    out.steps = d.size()
    if not r:
        where = "/".join(str(i) for i in r.path) or "<root>"
        out.fail(where, r.rule, r.reason)
        return
    out.lines.append(f"ok: {d.size()} nodes checked in {mode.value} mode")
    out.result = {"nodes": d.size(), "mode": mode.value}


def parse_trace(text: str) -> SK.SKTrace:
    """One step per line: POSITION RULE [TERM], where POSITION is ``.`` or a
    string of 0 (function side) and 1 (argument side) digits and TERM is the
    discarded argument of a K-expand step."""
    steps = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 2)
        if len(parts) < 2:
            raise UsageError(f"trace line {n}: expected POSITION RULE [TERM]")
        pos, rule = parts[0], parts[1]
        if pos != "." and set(pos) - {"0", "1"}:
            raise UsageError(f"trace line {n}: bad position {pos!r}")
        if rule not in SK.RULES:
            raise UsageError(f"trace line {n}: unknown rule {rule!r}")
        arg = None
        if len(parts) == 3:
            try:
                arg = SK.parse_sk(parts[2])
            except ValueError as e:
                raise UsageError(f"trace line {n}: {e}") from None
        position = () if pos == "." else tuple(int(c) for c in pos)
        steps.append(SK.Step(position, rule, arg))
    return SK.SKTrace(tuple(steps))


def format_trace(trace: SK.SKTrace) -> str:
    lines = []
    for s in trace.steps:
        pos = "".join(str(i) for i in s.position) or "."
        lines.append(f"{pos} {s.rule}" + (f" {s.arg}" if s.arg is not None else ""))
    return "\n".join(lines) + "\n"


def cmd_sk(args, out: Outcome) -> None:
    if args.detour:
        d = SK.top_detour()
        _emit_derivation(args, out, d)
        return
    if args.lhs is None or args.rhs is None:
        raise UsageError("sk needs --lhs and --rhs (or --detour)")
    try:
        s, t = SK.parse_sk(args.lhs), SK.parse_sk(args.rhs)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.probe:
        if not (SK.is_pure(s) and SK.is_pure(t)):
            raise UsageError("--probe needs pure S/K terms")
        r = SK.confluence_probe(s, t, budget=args.budget)
        if r:
            out.lines.append(f"joinable: both sides reach {r.meet}")
            out.lines.append(format_trace(r.trace).rstrip("\n"))
            out.steps = len(r.trace)
            out.result = {"meet": str(r.meet), "trace": format_trace(r.trace)}
        else:
            out.fail("probe", "inconclusive", f"no common reduct after exploring {r.explored} terms")
        return
    if args.trace is not None:
        trace = parse_trace(_read(args.trace).decode("utf-8", "replace"))
    else:
        if not (SK.is_pure(s) and SK.is_pure(t)):
            raise UsageError("without --trace both sides must be pure S/K terms")
        r = SK.confluence_probe(s, t, budget=args.budget)
        if not r:
            out.fail("probe", "inconclusive", f"no rewrite trace found after exploring {r.explored} terms")
            return
        trace = r.trace
    out.steps = len(trace)
    try:
        d = SK.derive_subtyping(s, t, trace)
    except SK.TraceError as e:
        out.fail("trace", "replay", str(e))
        return
    _emit_derivation(args, out, d)


def _emit_derivation(args, out: Outcome, d) -> None:
    r = check(d)
    if not r:
        out.fail("/".join(map(str, r.path)) or "<root>", r.rule, r.reason)
        return
    text = write_derivation(d)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise UsageError(f"cannot write {args.out}: {e.strerror}") from None
        out.lines.append(f"wrote {d.size()} nodes to {args.out}")
    elif not args.json:
        out.lines.append(text.rstrip("\n"))
    out.result = {"nodes": d.size(), "out": args.out}


def cmd_harness(args, out: Outcome) -> None:
    rep = safety_harness(n=args.n, size=args.size, fuel=args.fuel, seed=args.seed)
    out.steps = rep.steps
    out.lines.append(rep.summary())
    for v in rep.violations:
        out.fail(f"seed {v.seed}", v.kind, v.detail)
    out.result = {"programs": rep.n, "values": rep.values, "fuel_exhausted": rep.fuel_exhausted,
                  "violations": len(rep.violations)}


# ---------------------------------------------------------------- argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser(fuel: int) -> argparse.ArgumentParser:
    p = _Parser(prog="fomega", description="Type-level computation with interval kinds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help: str, with_fuel: bool = True):
        c = sub.add_parser(name, help=help)
        c.add_argument("--json", action="store_true", help="print a machine-readable report")
        if with_fuel:
            c.add_argument("--fuel", type=_nonneg, default=fuel, help=f"search fuel (default {fuel})")
        return c

    c = add("check", "type-check a declaration file")
    c.add_argument("file")

    c = add("nf", "print the normal form of a type")
    c.add_argument("file")
    c.add_argument("--expr", required=True, help="a type definition name or a type expression")
    c.add_argument("--raw", action="store_true", help="skip the kinding check")
    c.add_argument("--show-shape", action="store_true", help="also print the simple kind")
    c.add_argument("--via-beta", action="store_true", help="use leftmost-outermost beta reduction")

    c = add("eval", "evaluate a term definition by call-by-value")
    c.add_argument("file")
    c.add_argument("--main", required=True)

    c = add("derive", "check a derivation file", with_fuel=False)
    c.add_argument("file")
    c.add_argument("--extended", action="store_true", help="check in extended mode")

    c = add("sk", "encode SK rewriting as subtyping", with_fuel=False)
    c.add_argument("--lhs")
    c.add_argument("--rhs")
    c.add_argument("--trace", help="file with one rewrite step per line")
    c.add_argument("--out", help="write the derivation here instead of stdout")
    c.add_argument("--probe", action="store_true", help="search for a common reduct")
    c.add_argument("--budget", type=_nonneg, default=2000, help="terms explored per side")
    c.add_argument("--detour", action="store_true", help="emit the S <= S derivation that passes through Top")

    c = add("harness", "run the type-safety harness on generated programs")
    c.add_argument("--n", type=_nonneg, default=1000)
    c.add_argument("--size", type=_nonneg, default=8)
    c.add_argument("--seed", type=int, default=0)
    return p


COMMANDS = {"check": cmd_check, "nf": cmd_nf, "eval": cmd_eval, "derive": cmd_derive,
            "sk": cmd_sk, "harness": cmd_harness}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser(default_fuel())
        if not argv or argv[0] in ("-h", "--help"):
            parser.print_help(stdout)
            return OK if argv else USAGE
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except UsageError as e:
        print(f"fomega: {e}", file=stderr)
        return USAGE
    except SystemExit as e:  # --help on a subcommand
        return OK if e.code in (0, None) else USAGE
    out = Outcome(args.command)
    try:
        COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"fomega {args.command}: {e}", file=stderr)
        return USAGE
    except PreconditionError as e:
        out.fail(args.command, "precondition", str(e))
    if args.json:
        print(json.dumps(out.report(), indent=2), file=stdout)
    else:
        for line in out.lines:
            print(line, file=stdout)
        for d in out.diagnostics:
            if d not in out.warnings:
                print(f"error: {d}", file=stderr)
    return OK if out.ok else FAILED


__all__ = ["run", "build_parser", "parse_trace", "format_trace", "UsageError"]
