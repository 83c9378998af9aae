"""Rule-by-rule derivation checker for the declarative and canonical systems.

Each rule is a function from the node's conclusion and its premises'
conclusions to nothing (ok) or an exception describing the first violated
constraint. Metavariables that do not occur in the conclusion are read off
the premises and then cross-checked by equations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from ..hereditary import hsubst_kind
from ..syntax import (
    BOT, TOP, All, App, Arr, Bot, DArr, Intv, Lam, TmAbs, TmApp, TmBind, TmTAbs, TmTApp,
    TmVar, Top, TpBind, TpVar, erase_kind, extend, lookup_kind, lookup_type, shift_type,
    subst_kind, subst_type, to_spine,
)
from .judgments import (
    CCtxWf, CKindCheck, CKindEq, CKindSynth, CKindWf, CNeKind, CSpineEq, CSpineKind,
    CSubCheck, CSubkind, CSubProper, CTypeEq, CVarKind, CtxWf, Derivation, KindEq, KindWf,
    Kinding, Subkind, Subtype, TfSub, TypeEq, Typing,
)

STAR_KIND = Intv(BOT, TOP)


class Mode(enum.Enum):
    ORIGINAL = "original"
    EXTENDED = "extended"


@dataclass(frozen=True)
class Ok:
    ok: bool = True

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class RuleError:
    path: tuple
    rule: str
    reason: str
    ok: bool = False

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        where = "/".join(str(i) for i in self.path) or "<root>"
        return f"{where} [{self.rule}]: {self.reason}"


class _Fail(Exception):
    pass


def need(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


def is_a(j, cls, msg: str | None = None):
    need(isinstance(j, cls), msg or f"expected a {cls.__name__} judgment, got {type(j).__name__}")
    return j


def same(a, b, what: str) -> None:
    need(a == b, f"{what} mismatch")


def is_star(k) -> bool:
    return k == STAR_KIND


RULES: dict[str, tuple[int, int, Callable]] = {}


def rule(name: str, required: int, gray: int = 0):
    def deco(fn):
        RULES[name] = (required, gray, fn)
        return fn
    return deco


# ================================================================ declarative
# context and kind formation


@rule("C-Empty", 0)
def _c_empty(c, ps):
    is_a(c, CtxWf)
    need(c.ctx == (), "context is not empty")


@rule("C-TpBind", 2)
def _c_tpbind(c, ps):
    is_a(c, CtxWf)
    need(len(c.ctx) > 0 and isinstance(c.ctx[-1], TpBind), "last binding is not a type binding")
    g = c.ctx[:-1]
    same(ps[0], CtxWf(g), "context premise")
    same(ps[1], KindWf(g, c.ctx[-1].kind), "kind premise")


@rule("C-TmBind", 2)
def _c_tmbind(c, ps):
    is_a(c, CtxWf)
    need(len(c.ctx) > 0 and isinstance(c.ctx[-1], TmBind), "last binding is not a term binding")
    g = c.ctx[:-1]
    same(ps[0], CtxWf(g), "context premise")
    same(ps[1], Kinding(g, c.ctx[-1].ty, STAR_KIND), "type premise")


@rule("Wf-Intv", 2)
def _wf_intv(c, ps):
    is_a(c, KindWf)
    k = is_a(c.kind, Intv, "not an interval kind")
    same(ps[0], Kinding(c.ctx, k.lo, STAR_KIND), "lower bound premise")
    same(ps[1], Kinding(c.ctx, k.hi, STAR_KIND), "upper bound premise")


@rule("Wf-DArr", 2)
def _wf_darr(c, ps):
    is_a(c, KindWf)
    k = is_a(c.kind, DArr, "not an arrow kind")
    same(ps[0], KindWf(c.ctx, k.dom), "domain premise")
    same(ps[1], KindWf(extend(c.ctx, TpBind(k.dom)), k.cod), "codomain premise")


# kinding


@rule("K-Var", 1)
def _k_var(c, ps):
    is_a(c, Kinding)
    v = is_a(c.ty, TpVar, "subject is not a variable")
    same(ps[0], CtxWf(c.ctx), "context premise")
    same(lookup_kind(c.ctx, v.index), c.kind, "context lookup")


@rule("K-Top", 1)
def _k_top(c, ps):
    is_a(c, Kinding)
    need(isinstance(c.ty, Top) and is_star(c.kind), "conclusion is not Top : *")
    same(ps[0], CtxWf(c.ctx), "context premise")


@rule("K-Bot", 1)
def _k_bot(c, ps):
    is_a(c, Kinding)
    need(isinstance(c.ty, Bot) and is_star(c.kind), "conclusion is not Bot : *")
    same(ps[0], CtxWf(c.ctx), "context premise")


@rule("K-Arr", 2)
def _k_arr(c, ps):
    is_a(c, Kinding)
    a = is_a(c.ty, Arr, "subject is not an arrow")
    need(is_star(c.kind), "kind is not *")
    same(ps[0], Kinding(c.ctx, a.dom, STAR_KIND), "domain premise")
    same(ps[1], Kinding(c.ctx, a.cod, STAR_KIND), "codomain premise")


@rule("K-Abs", 2, 1)
def _k_abs(c, ps):
    is_a(c, Kinding)
    a = is_a(c.ty, Lam, "subject is not an abstraction")
    k = is_a(c.kind, DArr, "kind is not an arrow")
    same(a.kind, k.dom, "domain annotation")
    inner = extend(c.ctx, TpBind(a.kind))
    same(ps[0], KindWf(c.ctx, a.kind), "domain premise")
    same(ps[1], Kinding(inner, a.body, k.cod), "body premise")
    if len(ps) > 2:
        same(ps[2], KindWf(inner, k.cod), "codomain validity premise")


@rule("K-All", 2)
def _k_all(c, ps):
    is_a(c, Kinding)
    a = is_a(c.ty, All, "subject is not a universal")
    need(is_star(c.kind), "kind is not *")
    same(ps[0], KindWf(c.ctx, a.kind), "bound premise")
    same(ps[1], Kinding(extend(c.ctx, TpBind(a.kind)), a.body, STAR_KIND), "body premise")


@rule("K-App", 2, 2)
def _k_app(c, ps):
    is_a(c, Kinding)
    a = is_a(c.ty, App, "subject is not an application")
    p0 = is_a(ps[0], Kinding)
    same((p0.ctx, p0.ty), (c.ctx, a.fn), "operator premise")
    k = is_a(p0.kind, DArr, "operator kind is not an arrow")
    same(ps[1], Kinding(c.ctx, a.arg, k.dom), "argument premise")
    same(c.kind, subst_kind(k.cod, 0, a.arg), "result kind")
    if len(ps) > 2:
        same(ps[2], KindWf(extend(c.ctx, TpBind(k.dom)), k.cod), "codomain validity premise")
        same(ps[3], KindWf(c.ctx, c.kind), "result validity premise")


@rule("K-Sing", 1)
def _k_sing(c, ps):
    is_a(c, Kinding)
    same(c.kind, Intv(c.ty, c.ty), "singleton kind")
    p0 = is_a(ps[0], Kinding)
    same((p0.ctx, p0.ty), (c.ctx, c.ty), "premise subject")
    is_a(p0.kind, Intv, "premise kind is not an interval")


@rule("K-Sub", 2)
def _k_sub(c, ps):
    is_a(c, Kinding)
    p0 = is_a(ps[0], Kinding)
    same((p0.ctx, p0.ty), (c.ctx, c.ty), "premise subject")
    same(ps[1], Subkind(c.ctx, p0.kind, c.kind), "subkinding premise")


# typing


@rule("T-Var", 1)
def _t_var(c, ps):
    is_a(c, Typing)
    v = is_a(c.term, TmVar, "subject is not a variable")
    same(ps[0], CtxWf(c.ctx), "context premise")
    same(lookup_type(c.ctx, v.index), c.ty, "context lookup")


@rule("T-Abs", 3)
def _t_abs(c, ps):
    is_a(c, Typing)
    t = is_a(c.term, TmAbs, "subject is not an abstraction")
    a = is_a(c.ty, Arr, "type is not an arrow")
    same(t.ty, a.dom, "domain annotation")
    same(ps[0], Kinding(c.ctx, a.dom, STAR_KIND), "domain premise")
    same(ps[1], Kinding(c.ctx, a.cod, STAR_KIND), "codomain premise")
    same(ps[2], Typing(extend(c.ctx, TmBind(a.dom)), t.body, a.cod), "body premise")


@rule("T-App", 2)
def _t_app(c, ps):
    is_a(c, Typing)
    t = is_a(c.term, TmApp, "subject is not an application")
    p0 = is_a(ps[0], Typing)
    same((p0.ctx, p0.term), (c.ctx, t.fn), "function premise")
    a = is_a(p0.ty, Arr, "function type is not an arrow")
    same(a.cod, c.ty, "result type")
    same(ps[1], Typing(c.ctx, t.arg, a.dom), "argument premise")


@rule("T-TAbs", 2)
def _t_tabs(c, ps):
    is_a(c, Typing)
    t = is_a(c.term, TmTAbs, "subject is not a type abstraction")
    a = is_a(c.ty, All, "type is not a universal")
    same(t.kind, a.kind, "bound annotation")
    same(ps[0], KindWf(c.ctx, a.kind), "bound premise")
    same(ps[1], Typing(extend(c.ctx, TpBind(a.kind)), t.body, a.body), "body premise")


@rule("T-TApp", 2)
def _t_tapp(c, ps):
    is_a(c, Typing)
    t = is_a(c.term, TmTApp, "subject is not a type application")
    p0 = is_a(ps[0], Typing)
    same((p0.ctx, p0.term), (c.ctx, t.fn), "function premise")
    a = is_a(p0.ty, All, "function type is not a universal")
    same(ps[1], Kinding(c.ctx, t.ty, a.kind), "argument premise")
    same(c.ty, subst_type(a.body, 0, t.ty), "instantiated type")


@rule("T-Sub", 2)
def _t_sub(c, ps):
    is_a(c, Typing)
    p0 = is_a(ps[0], Typing)
    same((p0.ctx, p0.term), (c.ctx, c.term), "premise subject")
    same(ps[1], Subtype(c.ctx, p0.ty, c.ty, STAR_KIND), "subtyping premise")


# subkinding


@rule("SK-Intv", 2)
def _sk_intv(c, ps):
    is_a(c, Subkind)
    lo = is_a(c.lo, Intv, "left kind is not an interval")
    hi = is_a(c.hi, Intv, "right kind is not an interval")
    same(ps[0], Subtype(c.ctx, hi.lo, lo.lo, STAR_KIND), "lower bound premise")
    same(ps[1], Subtype(c.ctx, lo.hi, hi.hi, STAR_KIND), "upper bound premise")


@rule("SK-DArr", 3)
def _sk_darr(c, ps):
    is_a(c, Subkind)
    lo = is_a(c.lo, DArr, "left kind is not an arrow")
    hi = is_a(c.hi, DArr, "right kind is not an arrow")
    same(ps[0], KindWf(c.ctx, lo), "left kind validity premise")
    same(ps[1], Subkind(c.ctx, hi.dom, lo.dom), "domain premise")
    same(ps[2], Subkind(extend(c.ctx, TpBind(hi.dom)), lo.cod, hi.cod), "codomain premise")


# subtyping


@rule("ST-Refl", 1)
def _st_refl(c, ps):
    is_a(c, Subtype)
    same(c.lo, c.hi, "sides")
    same(ps[0], Kinding(c.ctx, c.lo, c.kind), "kinding premise")


@rule("ST-Trans", 2)
def _st_trans(c, ps):
    is_a(c, Subtype)
    p0 = is_a(ps[0], Subtype)
    same(p0, Subtype(c.ctx, c.lo, p0.hi, c.kind), "left premise")
    same(ps[1], Subtype(c.ctx, p0.hi, c.hi, c.kind), "right premise")


@rule("ST-Top", 1)
def _st_top(c, ps):
    is_a(c, Subtype)
    need(isinstance(c.hi, Top) and is_star(c.kind), "conclusion is not A <= Top : *")
    p0 = is_a(ps[0], Kinding)
    same((p0.ctx, p0.ty), (c.ctx, c.lo), "premise subject")
    is_a(p0.kind, Intv, "premise kind is not an interval")


@rule("ST-Bot", 1)
def _st_bot(c, ps):
    is_a(c, Subtype)
    need(isinstance(c.lo, Bot) and is_star(c.kind), "conclusion is not Bot <= A : *")
    p0 = is_a(ps[0], Kinding)
    same((p0.ctx, p0.ty), (c.ctx, c.hi), "premise subject")
    is_a(p0.kind, Intv, "premise kind is not an interval")


def _beta(c, ps, redex, reduct):
    app = is_a(redex, App, "no application on the redex side")
    lam = is_a(app.fn, Lam, "no abstraction on the redex side")
    p0 = is_a(ps[0], Kinding)
    inner = extend(c.ctx, TpBind(lam.kind))
    same((p0.ctx, p0.ty), (inner, lam.body), "body premise")
    same(ps[1], Kinding(c.ctx, app.arg, lam.kind), "argument premise")
    same(reduct, subst_type(lam.body, 0, app.arg), "contractum")
    same(c.kind, subst_kind(p0.kind, 0, app.arg), "result kind")
    if len(ps) > 2:
        same(ps[2], Kinding(c.ctx, reduct, c.kind), "contractum validity premise")
        same(ps[3], KindWf(inner, p0.kind), "kind validity premise")
        same(ps[4], KindWf(c.ctx, c.kind), "result kind validity premise")


@rule("ST-Beta1", 2, 3)
def _st_beta1(c, ps):
    is_a(c, Subtype)
    _beta(c, ps, c.lo, c.hi)


@rule("ST-Beta2", 2, 3)
def _st_beta2(c, ps):
    is_a(c, Subtype)
    _beta(c, ps, c.hi, c.lo)


def _eta(c, ps, expanded, a):
    k = is_a(c.kind, DArr, "kind is not an arrow")
    lam = is_a(expanded, Lam, "no abstraction on the expanded side")
    same(lam.kind, k.dom, "domain annotation")
    body = is_a(lam.body, App, "abstraction body is not an application")
    same(body.arg, TpVar(0), "argument is not the bound variable")
    # the operator must be the other side shifted under the binder: this is freshness
    same(body.fn, shift_type(a, 1), "operator under the binder")
    same(ps[0], Kinding(c.ctx, a, c.kind), "kinding premise")


@rule("ST-Eta1", 1)
def _st_eta1(c, ps):
    is_a(c, Subtype)
    _eta(c, ps, c.lo, c.hi)


@rule("ST-Eta2", 1)
def _st_eta2(c, ps):
    is_a(c, Subtype)
    _eta(c, ps, c.hi, c.lo)


@rule("ST-Arr", 2)
def _st_arr(c, ps):
    is_a(c, Subtype)
    lo = is_a(c.lo, Arr, "left side is not an arrow")
    hi = is_a(c.hi, Arr, "right side is not an arrow")
    need(is_star(c.kind), "kind is not *")
    same(ps[0], Subtype(c.ctx, hi.dom, lo.dom, STAR_KIND), "domain premise")
    same(ps[1], Subtype(c.ctx, lo.cod, hi.cod, STAR_KIND), "codomain premise")


@rule("ST-All", 3)
def _st_all(c, ps):
    is_a(c, Subtype)
    lo = is_a(c.lo, All, "left side is not a universal")
    hi = is_a(c.hi, All, "right side is not a universal")
    need(is_star(c.kind), "kind is not *")
    same(ps[0], Kinding(c.ctx, lo, STAR_KIND), "left kinding premise")
    same(ps[1], Subkind(c.ctx, hi.kind, lo.kind), "bound premise")
    same(ps[2], Subtype(extend(c.ctx, TpBind(hi.kind)), lo.body, hi.body, STAR_KIND), "body premise")


@rule("ST-Abs", 3)
def _st_abs(c, ps):
    is_a(c, Subtype)
    lo = is_a(c.lo, Lam, "left side is not an abstraction")
    hi = is_a(c.hi, Lam, "right side is not an abstraction")
    k = is_a(c.kind, DArr, "kind is not an arrow")
    same(ps[0], Kinding(c.ctx, lo, k), "left kinding premise")
    same(ps[1], Kinding(c.ctx, hi, k), "right kinding premise")
    same(ps[2], Subtype(extend(c.ctx, TpBind(k.dom)), lo.body, hi.body, k.cod), "body premise")


@rule("ST-App", 2, 3)
def _st_app(c, ps):
    is_a(c, Subtype)
    lo = is_a(c.lo, App, "left side is not an application")
    hi = is_a(c.hi, App, "right side is not an application")
    p0 = is_a(ps[0], Subtype)
    same((p0.ctx, p0.lo, p0.hi), (c.ctx, lo.fn, hi.fn), "operator premise")
    k = is_a(p0.kind, DArr, "operator kind is not an arrow")
    same(ps[1], TypeEq(c.ctx, lo.arg, hi.arg, k.dom), "argument premise")
    same(c.kind, subst_kind(k.cod, 0, lo.arg), "result kind")
    if len(ps) > 2:
        same(ps[2], Kinding(c.ctx, lo.arg, k.dom), "argument validity premise")
        same(ps[3], KindWf(extend(c.ctx, TpBind(k.dom)), k.cod), "codomain validity premise")
        same(ps[4], KindWf(c.ctx, c.kind), "result validity premise")


@rule("ST-Bnd1", 1)
def _st_bnd1(c, ps):
    is_a(c, Subtype)
    need(is_star(c.kind), "kind is not *")
    p0 = is_a(ps[0], Kinding)
    same((p0.ctx, p0.ty), (c.ctx, c.hi), "premise subject")
    k = is_a(p0.kind, Intv, "premise kind is not an interval")
    same(k.lo, c.lo, "projected lower bound")


@rule("ST-Bnd2", 1)
def _st_bnd2(c, ps):
    is_a(c, Subtype)
    need(is_star(c.kind), "kind is not *")
    p0 = is_a(ps[0], Kinding)
    same((p0.ctx, p0.ty), (c.ctx, c.lo), "premise subject")
    k = is_a(p0.kind, Intv, "premise kind is not an interval")
    same(k.hi, c.hi, "projected upper bound")


@rule("ST-Intv", 1)
def _st_intv(c, ps):
    is_a(c, Subtype)
    same(c.kind, Intv(c.lo, c.hi), "interval kind")
    p0 = is_a(ps[0], Subtype)
    same((p0.ctx, p0.lo, p0.hi), (c.ctx, c.lo, c.hi), "premise sides")
    is_a(p0.kind, Intv, "premise kind is not an interval")


@rule("ST-Sub", 2)
def _st_sub(c, ps):
    is_a(c, Subtype)
    p0 = is_a(ps[0], Subtype)
    same((p0.ctx, p0.lo, p0.hi), (c.ctx, c.lo, c.hi), "premise sides")
    same(ps[1], Subkind(c.ctx, p0.kind, c.kind), "subkinding premise")


@rule("SK-AntiSym", 2)
def _sk_antisym(c, ps):
    is_a(c, KindEq)
    same(ps[0], Subkind(c.ctx, c.left, c.right), "forward premise")
    same(ps[1], Subkind(c.ctx, c.right, c.left), "backward premise")


@rule("ST-AntiSym", 2)
def _st_antisym(c, ps):
    is_a(c, TypeEq)
    same(ps[0], Subtype(c.ctx, c.left, c.right, c.kind), "forward premise")
    same(ps[1], Subtype(c.ctx, c.right, c.left, c.kind), "backward premise")


# ================================================================ canonical


def _singleton_of(v):
    return Intv(v, v)


@rule("CC-Empty", 0)
def _cc_empty(c, ps):
    is_a(c, CCtxWf)
    need(c.ctx == (), "context is not empty")


@rule("CC-TpBind", 2)
def _cc_tpbind(c, ps):
    is_a(c, CCtxWf)
    need(len(c.ctx) > 0 and isinstance(c.ctx[-1], TpBind), "last binding is not a type binding")
    g = c.ctx[:-1]
    same(ps[0], CCtxWf(g), "context premise")
    same(ps[1], CKindWf(g, c.ctx[-1].kind), "kind premise")


@rule("CC-TmBind", 2)
def _cc_tmbind(c, ps):
    is_a(c, CCtxWf)
    need(len(c.ctx) > 0 and isinstance(c.ctx[-1], TmBind), "last binding is not a term binding")
    g = c.ctx[:-1]
    v = c.ctx[-1].ty
    same(ps[0], CCtxWf(g), "context premise")
    same(ps[1], CKindSynth(g, v, _singleton_of(v)), "type premise")


@rule("CWf-Intv", 2)
def _cwf_intv(c, ps):
    is_a(c, CKindWf)
    k = is_a(c.kind, Intv, "not an interval kind")
    same(ps[0], CKindSynth(c.ctx, k.lo, _singleton_of(k.lo)), "lower bound premise")
    same(ps[1], CKindSynth(c.ctx, k.hi, _singleton_of(k.hi)), "upper bound premise")


@rule("CWf-DArr", 2)
def _cwf_darr(c, ps):
    is_a(c, CKindWf)
    k = is_a(c.kind, DArr, "not an arrow kind")
    same(ps[0], CKindWf(c.ctx, k.dom), "domain premise")
    same(ps[1], CKindWf(extend(c.ctx, TpBind(k.dom)), k.cod), "codomain premise")


@rule("CV-Var", 1)
def _cv_var(c, ps):
    is_a(c, CVarKind)
    same(ps[0], CCtxWf(c.ctx), "context premise")
    same(lookup_kind(c.ctx, c.var), c.kind, "context lookup")


@rule("CV-Sub", 3)
def _cv_sub(c, ps):
    is_a(c, CVarKind)
    p0 = is_a(ps[0], CVarKind)
    same((p0.ctx, p0.var), (c.ctx, c.var), "premise variable")
    same(ps[1], CSubkind(c.ctx, p0.kind, c.kind), "subkinding premise")
    same(ps[2], CKindWf(c.ctx, c.kind), "kind premise")


@rule("CK-Empty", 0)
def _ck_empty(c, ps):
    is_a(c, CSpineKind)
    need(c.spine == (), "spine is not empty")
    same(c.kind, c.result, "result kind")


@rule("CK-Cons", 3)
def _ck_cons(c, ps):
    is_a(c, CSpineKind)
    need(len(c.spine) > 0, "spine is empty")
    k = is_a(c.kind, DArr, "kind is not an arrow")
    u, rest = c.spine[0], c.spine[1:]
    same(ps[0], CKindCheck(c.ctx, u, k.dom), "argument premise")
    same(ps[1], CKindWf(c.ctx, k.dom), "domain premise")
    cod = hsubst_kind(k.cod, 0, erase_kind(k.dom), u)
    same(ps[2], CSpineKind(c.ctx, cod, rest, c.result), "spine premise")


@rule("CK-Ne", 2)
def _ck_ne(c, ps):
    is_a(c, CNeKind)
    e = to_spine(c.ty)
    x = is_a(e.head, TpVar, "head is not a variable")
    p0 = is_a(ps[0], CVarKind)
    same((p0.ctx, p0.var), (c.ctx, x.index), "head premise")
    same(ps[1], CSpineKind(c.ctx, p0.kind, e.spine, c.kind), "spine premise")


@rule("CK-Sub", 2)
def _ck_sub(c, ps):
    is_a(c, CKindCheck)
    p0 = is_a(ps[0], CKindSynth)
    same((p0.ctx, p0.ty), (c.ctx, c.ty), "premise subject")
    same(ps[1], CSubkind(c.ctx, p0.kind, c.kind), "subkinding premise")


@rule("CK-Top", 1)
def _ck_top(c, ps):
    is_a(c, CKindSynth)
    need(isinstance(c.ty, Top) and c.kind == Intv(TOP, TOP), "conclusion is not Top => Top..Top")
    same(ps[0], CCtxWf(c.ctx), "context premise")


@rule("CK-Bot", 1)
def _ck_bot(c, ps):
    is_a(c, CKindSynth)
    need(isinstance(c.ty, Bot) and c.kind == Intv(BOT, BOT), "conclusion is not Bot => Bot..Bot")
    same(ps[0], CCtxWf(c.ctx), "context premise")


@rule("CK-Arr", 2)
def _ck_arr(c, ps):
    is_a(c, CKindSynth)
    a = is_a(c.ty, Arr, "subject is not an arrow")
    same(c.kind, _singleton_of(a), "singleton kind")
    same(ps[0], CKindSynth(c.ctx, a.dom, _singleton_of(a.dom)), "domain premise")
    same(ps[1], CKindSynth(c.ctx, a.cod, _singleton_of(a.cod)), "codomain premise")


@rule("CK-All", 2)
def _ck_all(c, ps):
    is_a(c, CKindSynth)
    a = is_a(c.ty, All, "subject is not a universal")
    same(c.kind, _singleton_of(a), "singleton kind")
    same(ps[0], CKindWf(c.ctx, a.kind), "bound premise")
    same(ps[1], CKindSynth(extend(c.ctx, TpBind(a.kind)), a.body, _singleton_of(a.body)), "body premise")


@rule("CK-Abs", 2)
def _ck_abs(c, ps):
    is_a(c, CKindSynth)
    a = is_a(c.ty, Lam, "subject is not an abstraction")
    k = is_a(c.kind, DArr, "kind is not an arrow")
    same(a.kind, k.dom, "domain annotation")
    same(ps[0], CKindWf(c.ctx, a.kind), "domain premise")
    same(ps[1], CKindSynth(extend(c.ctx, TpBind(a.kind)), a.body, k.cod), "body premise")


@rule("CK-Sing", 1)
def _ck_sing(c, ps):
    is_a(c, CKindSynth)
    same(c.kind, _singleton_of(c.ty), "singleton kind")
    p0 = is_a(ps[0], CNeKind)
    same((p0.ctx, p0.ty), (c.ctx, c.ty), "premise subject")
    is_a(p0.kind, Intv, "premise kind is not an interval")


@rule("CST-Top", 1)
def _cst_top(c, ps):
    is_a(c, CSubProper)
    is_a(c.hi, Top, "right side is not Top")
    same(ps[0], CKindSynth(c.ctx, c.lo, _singleton_of(c.lo)), "kinding premise")


@rule("CST-Bot", 1)
def _cst_bot(c, ps):
    is_a(c, CSubProper)
    is_a(c.lo, Bot, "left side is not Bot")
    same(ps[0], CKindSynth(c.ctx, c.hi, _singleton_of(c.hi)), "kinding premise")


@rule("CST-Trans", 2)
def _cst_trans(c, ps):
    is_a(c, CSubProper)
    p0 = is_a(ps[0], CSubProper)
    same((p0.ctx, p0.lo), (c.ctx, c.lo), "left premise")
    same(ps[1], CSubProper(c.ctx, p0.hi, c.hi), "right premise")


@rule("CST-Ne", 2)
def _cst_ne(c, ps):
    is_a(c, CSubProper)
    lo, hi = to_spine(c.lo), to_spine(c.hi)
    x = is_a(lo.head, TpVar, "left head is not a variable")
    same(lo.head, hi.head, "heads")
    p0 = is_a(ps[0], CVarKind)
    same((p0.ctx, p0.var), (c.ctx, x.index), "head premise")
    p1 = is_a(ps[1], CSpineEq)
    same((p1.ctx, p1.kind, p1.left, p1.right), (c.ctx, p0.kind, lo.spine, hi.spine), "spine premise")
    is_a(p1.result, Intv, "spine result kind is not an interval")


@rule("CST-Bnd1", 1)
def _cst_bnd1(c, ps):
    is_a(c, CSubProper)
    p0 = is_a(ps[0], CNeKind)
    same((p0.ctx, p0.ty), (c.ctx, c.hi), "premise subject")
    k = is_a(p0.kind, Intv, "premise kind is not an interval")
    same(k.lo, c.lo, "projected lower bound")


@rule("CST-Bnd2", 1)
def _cst_bnd2(c, ps):
    is_a(c, CSubProper)
    p0 = is_a(ps[0], CNeKind)
    same((p0.ctx, p0.ty), (c.ctx, c.lo), "premise subject")
    k = is_a(p0.kind, Intv, "premise kind is not an interval")
    same(k.hi, c.hi, "projected upper bound")


@rule("CST-Arr", 2)
def _cst_arr(c, ps):
    is_a(c, CSubProper)
    lo = is_a(c.lo, Arr, "left side is not an arrow")
    hi = is_a(c.hi, Arr, "right side is not an arrow")
    same(ps[0], CSubProper(c.ctx, hi.dom, lo.dom), "domain premise")
    same(ps[1], CSubProper(c.ctx, lo.cod, hi.cod), "codomain premise")


@rule("CST-All", 3)
def _cst_all(c, ps):
    is_a(c, CSubProper)
    lo = is_a(c.lo, All, "left side is not a universal")
    hi = is_a(c.hi, All, "right side is not a universal")
    same(ps[0], CKindSynth(c.ctx, lo, _singleton_of(lo)), "left kinding premise")
    same(ps[1], CSubkind(c.ctx, hi.kind, lo.kind), "bound premise")
    same(ps[2], CSubProper(extend(c.ctx, TpBind(hi.kind)), lo.body, hi.body), "body premise")


@rule("CST-Intv", 3)
def _cst_intv(c, ps):
    is_a(c, CSubCheck)
    is_a(c.kind, Intv, "kind is not an interval")
    same(ps[0], CKindCheck(c.ctx, c.lo, c.kind), "left kinding premise")
    same(ps[1], CKindCheck(c.ctx, c.hi, c.kind), "right kinding premise")
    same(ps[2], CSubProper(c.ctx, c.lo, c.hi), "subtyping premise")


@rule("CST-Abs", 3)
def _cst_abs(c, ps):
    is_a(c, CSubCheck)
    lo = is_a(c.lo, Lam, "left side is not an abstraction")
    hi = is_a(c.hi, Lam, "right side is not an abstraction")
    k = is_a(c.kind, DArr, "kind is not an arrow")
    same(ps[0], CKindCheck(c.ctx, lo, k), "left kinding premise")
    same(ps[1], CKindCheck(c.ctx, hi, k), "right kinding premise")
    same(ps[2], CSubCheck(extend(c.ctx, TpBind(k.dom)), lo.body, hi.body, k.cod), "body premise")


@rule("CSK-Intv", 2)
def _csk_intv(c, ps):
    is_a(c, CSubkind)
    lo = is_a(c.lo, Intv, "left kind is not an interval")
    hi = is_a(c.hi, Intv, "right kind is not an interval")
    same(ps[0], CSubProper(c.ctx, hi.lo, lo.lo), "lower bound premise")
    same(ps[1], CSubProper(c.ctx, lo.hi, hi.hi), "upper bound premise")


@rule("CSK-DArr", 3)
def _csk_darr(c, ps):
    is_a(c, CSubkind)
    lo = is_a(c.lo, DArr, "left kind is not an arrow")
    hi = is_a(c.hi, DArr, "right kind is not an arrow")
    same(ps[0], CKindWf(c.ctx, lo), "left kind premise")
    same(ps[1], CSubkind(c.ctx, hi.dom, lo.dom), "domain premise")
    same(ps[2], CSubkind(extend(c.ctx, TpBind(hi.dom)), lo.cod, hi.cod), "codomain premise")


@rule("CSK-AntiSym", 4)
def _csk_antisym(c, ps):
    is_a(c, CKindEq)
    same(ps[0], CKindWf(c.ctx, c.left), "left kind premise")
    same(ps[1], CKindWf(c.ctx, c.right), "right kind premise")
    same(ps[2], CSubkind(c.ctx, c.left, c.right), "forward premise")
    same(ps[3], CSubkind(c.ctx, c.right, c.left), "backward premise")


@rule("CST-AntiSym", 3)
def _cst_antisym(c, ps):
    is_a(c, CTypeEq)
    same(ps[0], CKindWf(c.ctx, c.kind), "kind premise")
    same(ps[1], CSubCheck(c.ctx, c.left, c.right, c.kind), "forward premise")
    same(ps[2], CSubCheck(c.ctx, c.right, c.left, c.kind), "backward premise")


@rule("SpEq-Empty", 0)
def _speq_empty(c, ps):
    is_a(c, CSpineEq)
    need(c.left == () and c.right == (), "spines are not empty")
    same(c.kind, c.result, "result kind")


@rule("SpEq-Cons", 2)
def _speq_cons(c, ps):
    is_a(c, CSpineEq)
    need(len(c.left) > 0 and len(c.right) > 0, "a spine is empty")
    k = is_a(c.kind, DArr, "kind is not an arrow")
    u1, u2 = c.left[0], c.right[0]
    same(ps[0], CTypeEq(c.ctx, u1, u2, k.dom), "head premise")
    cod = hsubst_kind(k.cod, 0, erase_kind(k.dom), u1)
    same(ps[1], CSpineEq(c.ctx, cod, c.left[1:], c.right[1:], c.result), "tail premise")


# ================================================================ top level


@rule("TfST-Top", 1)
def _tf_top(c, ps):
    is_a(c, TfSub)
    is_a(c.hi, Top, "right side is not Top")
    same(ps[0], CKindSynth((), c.lo, _singleton_of(c.lo)), "kinding premise")


@rule("TfST-Bot", 1)
def _tf_bot(c, ps):
    is_a(c, TfSub)
    is_a(c.lo, Bot, "left side is not Bot")
    same(ps[0], CKindSynth((), c.hi, _singleton_of(c.hi)), "kinding premise")


@rule("TfST-Arr", 2)
def _tf_arr(c, ps):
    is_a(c, TfSub)
    lo = is_a(c.lo, Arr, "left side is not an arrow")
    hi = is_a(c.hi, Arr, "right side is not an arrow")
    same(ps[0], CSubProper((), hi.dom, lo.dom), "domain premise")
    same(ps[1], CSubProper((), lo.cod, hi.cod), "codomain premise")


@rule("TfST-All", 3)
def _tf_all(c, ps):
    is_a(c, TfSub)
    lo = is_a(c.lo, All, "left side is not a universal")
    hi = is_a(c.hi, All, "right side is not a universal")
    same(ps[0], CKindSynth((), lo, _singleton_of(lo)), "left kinding premise")
    same(ps[1], CSubkind((), hi.kind, lo.kind), "bound premise")
    same(ps[2], CSubProper((TpBind(hi.kind),), lo.body, hi.body), "body premise")


DECLARATIVE_RULES = frozenset(n for n in RULES if not n.startswith(("C", "SpEq", "Tf")) or n.startswith("C-"))
CANONICAL_RULES = frozenset(RULES) - DECLARATIVE_RULES


# ================================================================ driver


def check(d: Derivation, mode: Mode = Mode.ORIGINAL):
    """Validate every node of ``d``. Returns ``Ok()`` or the first ``RuleError``."""
    memo: dict[int, RuleError | None] = {}
    stack_guard: set[int] = set()

    def go(node: Derivation, path: tuple) -> RuleError | None:
        key = id(node)
        if key in memo:
            err = memo[key]
            return None if err is None else RuleError(path + err.path, err.rule, err.reason)
        if key in stack_guard:
            return RuleError(path, node.rule, "cyclic derivation")
        stack_guard.add(key)
        err = _check_node(node, mode)
        if err is not None:
            result = RuleError((), node.rule, err)
        else:
            result = None
            required, gray, _ = RULES[node.rule]
            limit = required + gray if mode is Mode.EXTENDED else required
            for i, p in enumerate(node.premises[:limit]):
                sub = go(p, (i,))
                if sub is not None:
                    result = sub
                    break
        stack_guard.discard(key)
        memo[key] = result
        return None if result is None else RuleError(path + result.path, result.rule, result.reason)

    err = go(d, ())
    return Ok() if err is None else err


def _check_node(node: Derivation, mode: Mode) -> str | None:
    if not isinstance(node, Derivation):
        return f"not a derivation: {type(node).__name__}"
    entry = RULES.get(node.rule)
    if entry is None:
        return f"unknown rule {node.rule!r}"
    required, gray, fn = entry
    n = len(node.premises)
    if mode is Mode.EXTENDED:
        if n != required + gray:
            return f"expected {required + gray} premises (validity conditions included), got {n}"
    elif n not in (required, required + gray):
        return f"expected {required} premises, got {n}"
    for p in node.premises:
        if not isinstance(p, Derivation):
            return "premise is not a derivation"
    concl = [p.conclusion for p in node.premises]
    if mode is Mode.ORIGINAL:
        concl = concl[:required]
    try:
        fn(node.conclusion, concl)
    except _Fail as e:
        return str(e)
    except (AttributeError, IndexError, TypeError) as e:  # malformed conclusions
        return f"malformed judgment: {e}"
    return None


def checks(d: Derivation, mode: Mode = Mode.ORIGINAL) -> bool:
    return bool(check(d, mode))


def drop_validity_conditions(d: Derivation) -> Derivation:
    """The same tree with every gray premise removed."""
    memo: dict[int, Derivation] = {}

    def go(node: Derivation) -> Derivation:
        if id(node) in memo:
            return memo[id(node)]
        required, gray, _ = RULES.get(node.rule, (len(node.premises), 0, None))
        prem = tuple(go(p) for p in node.premises[:required])
        out = Derivation(node.rule, node.conclusion, prem, node.side)
        memo[id(node)] = out
        return out

    return go(d)


__all__ = [
    "Mode", "Ok", "RuleError", "RULES", "check", "checks", "drop_validity_conditions",
    "DECLARATIVE_RULES", "CANONICAL_RULES", "STAR_KIND",
]
