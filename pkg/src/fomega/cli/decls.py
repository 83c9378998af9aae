"""Checking declaration files item by item."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..derivations.judgments import PreconditionError
from ..engine.canonical import ctx_wf_canonical, kind_check_fuel, subtype_fuel
from ..engine.terms import type_synth_term
from ..engine.toplevel import tf_subtype
from ..engine.trivalent import No, Yes
from ..normalizer import nf_ctx, nf_kind, nf_type
from ..syntax import STAR, Intv, TpBind, extend, type_fv
from ..simple import is_normal_at
from ..derivations.rules import STAR as STAR_KIND
from .surface import DeclFile, Postulate, TermDef, TypeDef


@dataclass(frozen=True)
class Diagnostic:
    path: str
    rule: str
    message: str

    def as_dict(self) -> dict:
        return {"path": self.path, "rule": self.rule, "message": self.message}

    def __str__(self) -> str:
        return f"{self.path}: [{self.rule}] {self.message}"


@dataclass
class Report:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    fuel_used: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


def _label(item) -> str:
    if isinstance(item, TermDef):
        return f"def {item.name}"
    if isinstance(item, Postulate):
        return f"postulate {item.name}"
    return f"type {item.name}"


class _Checker:
    def __init__(self, decls: DeclFile, fuel: int) -> None:
        self.decls, self.fuel = decls, fuel
        self.report = Report()

    def err(self, item, rule: str, message: str) -> None:
        self.report.errors.append(Diagnostic(_label(item), rule, message))

    def decide(self, item, rule: str, result, failure: str) -> bool:
        self.report.fuel_used += result.fuel_spent
        if isinstance(result, Yes):
            return True
        if isinstance(result, No):
            self.err(item, rule, failure)
        else:
            self.err(item, rule, f"{failure} (undecided within fuel {self.fuel})")
        return False

    def kind_ok(self, item, nctx, k) -> bool:
        if ctx_wf_canonical(extend(nctx, TpBind(k)), self.fuel) is None:
            self.err(item, "kind-wf", "the kind is not well-formed")
            return False
        return True

    def warn_bounds(self, item, k) -> None:
        """Warn when closed interval bounds are provably inconsistent."""
        if not isinstance(k, Intv) or type_fv(k.lo) or type_fv(k.hi):
            return
        lo, hi = nf_type((), k.lo), nf_type((), k.hi)
        if not (is_normal_at((), lo, STAR) and is_normal_at((), hi, STAR)):
            return
        try:
            holds = tf_subtype(lo, hi, self.fuel).holds
        except PreconditionError:
            return
        if not holds:
            self.report.warnings.append(Diagnostic(
                _label(item), "bounds", "inconsistent bounds: the lower bound is not below the upper"))

    def item(self, i: int, item) -> None:
        ctx = self.decls.context_before(i)
        nctx = nf_ctx(ctx)
        if isinstance(item, (Postulate, TypeDef)):
            k = nf_kind(nctx, item.kind)
            if not self.kind_ok(item, nctx, k):
                return
            if isinstance(item, Postulate) or item.body is None:
                self.warn_bounds(item, k)
                return
            v = nf_type(nctx, item.body)
            self.decide(item, "kind-check", kind_check_fuel(nctx, v, k, self.fuel),
                        "the body does not have the declared kind")
            return
        a = nf_type(nctx, item.ty)
        if not self.decide(item, "type-wf", kind_check_fuel(nctx, a, STAR_KIND, self.fuel),
                           "the declared type is not a proper type"):
            return
        typed = type_synth_term(ctx, item.term, self.fuel)
        if typed is None:
            self.err(item, "typing", "the term does not type-check")
            return
        b = nf_type(nctx, typed.ty)
        if b == a:
            return
        self.decide(item, "subtype", subtype_fuel(nctx, b, a, self.fuel),
                    "the synthesized type is not a subtype of the declared type")

    def run(self) -> Report:
        for i, item in enumerate(self.decls.items):
            self.item(i, item)
        return self.report


def check_decls(decls: DeclFile, fuel: int) -> Report:
    return _Checker(decls, fuel).run()


__all__ = ["Diagnostic", "Report", "check_decls"]
