"""Smart constructors for the declarative rules.

Each constructor takes premise derivations (plus whatever the conclusion
needs that the premises do not determine), computes the conclusion, and
raises ``PreconditionError`` when the premises have the wrong shape. The
result is a node the checker accepts whenever its premises are accepted.
"""

from __future__ import annotations

from ..syntax import (
    BOT, TOP, All, App, Arr, DArr, Intv, Lam, TmAbs, TmApp, TmBind, TmTAbs, TmTApp, TmVar,
    TpBind, TpVar, extend, lookup_kind, lookup_type, shift_type, subst_kind, subst_type,
)
from .judgments import (
    CtxWf, Derivation, KindEq, KindWf, Kinding, PreconditionError, Subkind, Subtype, TypeEq,
    Typing,
)

STAR = Intv(BOT, TOP)


def expect(d: Derivation, cls, what: str):
    if not isinstance(d, Derivation) or not isinstance(d.conclusion, cls):
        got = type(getattr(d, "conclusion", d)).__name__
        raise PreconditionError(f"{what}: expected a {cls.__name__} derivation, got {got}")
    return d.conclusion


def agree(a, b, what: str) -> None:
    if a != b:
        raise PreconditionError(f"{what} do not agree")


def node(rule: str, conclusion, *premises: Derivation, **side) -> Derivation:
    return Derivation(rule, conclusion, premises, side)


# ---------------------------------------------------------------- contexts and kinds


def c_empty() -> Derivation:
    return node("C-Empty", CtxWf(()))


def c_tpbind(ctx_wf: Derivation, kind_wf: Derivation) -> Derivation:
    c = expect(ctx_wf, CtxWf, "context premise")
    k = expect(kind_wf, KindWf, "kind premise")
    agree(c.ctx, k.ctx, "contexts")
    return node("C-TpBind", CtxWf(extend(c.ctx, TpBind(k.kind))), ctx_wf, kind_wf)


def c_tmbind(ctx_wf: Derivation, type_star: Derivation) -> Derivation:
    c = expect(ctx_wf, CtxWf, "context premise")
    t = expect(type_star, Kinding, "type premise")
    agree(c.ctx, t.ctx, "contexts")
    agree(t.kind, STAR, "binding kind and *")
    return node("C-TmBind", CtxWf(extend(c.ctx, TmBind(t.ty))), ctx_wf, type_star)


def wf_intv(lo: Derivation, hi: Derivation) -> Derivation:
    a = expect(lo, Kinding, "lower bound")
    b = expect(hi, Kinding, "upper bound")
    agree(a.ctx, b.ctx, "contexts")
    agree(a.kind, STAR, "lower bound kind and *")
    agree(b.kind, STAR, "upper bound kind and *")
    return node("Wf-Intv", KindWf(a.ctx, Intv(a.ty, b.ty)), lo, hi)


def wf_darr(dom: Derivation, cod: Derivation) -> Derivation:
    j = expect(dom, KindWf, "domain")
    k = expect(cod, KindWf, "codomain")
    agree(k.ctx, extend(j.ctx, TpBind(j.kind)), "codomain context")
    return node("Wf-DArr", KindWf(j.ctx, DArr(j.kind, k.kind)), dom, cod)


# ---------------------------------------------------------------- kinding


def k_var(ctx_wf: Derivation, index: int) -> Derivation:
    c = expect(ctx_wf, CtxWf, "context premise")
    k = lookup_kind(c.ctx, index)
    if k is None:
        raise PreconditionError(f"type variable {index} is not bound")
    return node("K-Var", Kinding(c.ctx, TpVar(index), k), ctx_wf)


def k_top(ctx_wf: Derivation) -> Derivation:
    c = expect(ctx_wf, CtxWf, "context premise")
    return node("K-Top", Kinding(c.ctx, TOP, STAR), ctx_wf)


def k_bot(ctx_wf: Derivation) -> Derivation:
    c = expect(ctx_wf, CtxWf, "context premise")
    return node("K-Bot", Kinding(c.ctx, BOT, STAR), ctx_wf)


def k_arr(dom: Derivation, cod: Derivation) -> Derivation:
    a = expect(dom, Kinding, "domain")
    b = expect(cod, Kinding, "codomain")
    agree(a.ctx, b.ctx, "contexts")
    agree((a.kind, b.kind), (STAR, STAR), "component kinds and *")
    return node("K-Arr", Kinding(a.ctx, Arr(a.ty, b.ty), STAR), dom, cod)


def k_abs(dom: Derivation, body: Derivation, cod_wf: Derivation | None = None) -> Derivation:
    j = expect(dom, KindWf, "domain")
    b = expect(body, Kinding, "body")
    agree(b.ctx, extend(j.ctx, TpBind(j.kind)), "body context")
    prem = (dom, body) if cod_wf is None else (dom, body, cod_wf)
    return node("K-Abs", Kinding(j.ctx, Lam(j.kind, b.ty), DArr(j.kind, b.kind)), *prem)


def k_all(bound: Derivation, body: Derivation) -> Derivation:
    k = expect(bound, KindWf, "bound")
    b = expect(body, Kinding, "body")
    agree(b.ctx, extend(k.ctx, TpBind(k.kind)), "body context")
    agree(b.kind, STAR, "body kind and *")
    return node("K-All", Kinding(k.ctx, All(k.kind, b.ty), STAR), bound, body)


def k_app(fn: Derivation, arg: Derivation, *gray: Derivation) -> Derivation:
    f = expect(fn, Kinding, "operator")
    a = expect(arg, Kinding, "argument")
    if not isinstance(f.kind, DArr):
        raise PreconditionError("operator kind is not an arrow")
    agree(f.ctx, a.ctx, "contexts")
    agree(f.kind.dom, a.kind, "operator domain and argument kind")
    result = subst_kind(f.kind.cod, 0, a.ty)
    return node("K-App", Kinding(f.ctx, App(f.ty, a.ty), result), fn, arg, *gray)


def k_sing(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    if not isinstance(a.kind, Intv):
        raise PreconditionError("K-Sing needs an interval kind")
    return node("K-Sing", Kinding(a.ctx, a.ty, Intv(a.ty, a.ty)), d)


def k_sub(d: Derivation, sk: Derivation) -> Derivation:
    a = expect(d, Kinding, "kinding")
    s = expect(sk, Subkind, "subkinding")
    agree((a.ctx, a.kind), (s.ctx, s.lo), "kinding and subkinding")
    if a.kind == s.hi:
        return d
    return node("K-Sub", Kinding(a.ctx, a.ty, s.hi), d, sk)


# ---------------------------------------------------------------- typing


def t_var(ctx_wf: Derivation, index: int) -> Derivation:
    c = expect(ctx_wf, CtxWf, "context premise")
    ty = lookup_type(c.ctx, index)
    if ty is None:
        raise PreconditionError(f"term variable {index} is not bound")
    return node("T-Var", Typing(c.ctx, TmVar(index), ty), ctx_wf)


def t_abs(dom: Derivation, cod: Derivation, body: Derivation) -> Derivation:
    a = expect(dom, Kinding, "domain")
    b = expect(cod, Kinding, "codomain")
    t = expect(body, Typing, "body")
    agree(t.ctx, extend(a.ctx, TmBind(a.ty)), "body context")
    agree(t.ty, b.ty, "body type and codomain")
    return node("T-Abs", Typing(a.ctx, TmAbs(a.ty, t.term), Arr(a.ty, b.ty)), dom, cod, body)


def t_app(fn: Derivation, arg: Derivation) -> Derivation:
    f = expect(fn, Typing, "function")
    a = expect(arg, Typing, "argument")
    if not isinstance(f.ty, Arr):
        raise PreconditionError("function type is not an arrow")
    agree(f.ty.dom, a.ty, "domain and argument type")
    return node("T-App", Typing(f.ctx, TmApp(f.term, a.term), f.ty.cod), fn, arg)


def t_tabs(bound: Derivation, body: Derivation) -> Derivation:
    k = expect(bound, KindWf, "bound")
    t = expect(body, Typing, "body")
    agree(t.ctx, extend(k.ctx, TpBind(k.kind)), "body context")
    return node("T-TAbs", Typing(k.ctx, TmTAbs(k.kind, t.term), All(k.kind, t.ty)), bound, body)


def t_tapp(fn: Derivation, arg: Derivation) -> Derivation:
    f = expect(fn, Typing, "function")
    a = expect(arg, Kinding, "argument")
    if not isinstance(f.ty, All):
        raise PreconditionError("function type is not a universal")
    agree(f.ty.kind, a.kind, "bound and argument kind")
    return node("T-TApp", Typing(f.ctx, TmTApp(f.term, a.ty), subst_type(f.ty.body, 0, a.ty)),
                fn, arg)


def t_sub(d: Derivation, st: Derivation) -> Derivation:
    t = expect(d, Typing, "typing")
    s = expect(st, Subtype, "subtyping")
    agree((t.ctx, t.ty, STAR), (s.ctx, s.lo, s.kind), "typing and subtyping")
    if s.lo == s.hi:
        return d
    return node("T-Sub", Typing(t.ctx, t.term, s.hi), d, st)


# ---------------------------------------------------------------- subkinding


def sk_intv(lower: Derivation, upper: Derivation) -> Derivation:
    """``lower`` proves A2 <= A1, ``upper`` proves B1 <= B2; gives A1..B1 <= A2..B2."""
    lo = expect(lower, Subtype, "lower bound")
    up = expect(upper, Subtype, "upper bound")
    agree(lo.ctx, up.ctx, "contexts")
    agree((lo.kind, up.kind), (STAR, STAR), "bound kinds and *")
    return node("SK-Intv", Subkind(lo.ctx, Intv(lo.hi, up.lo), Intv(lo.lo, up.hi)), lower, upper)


def sk_darr(left_wf: Derivation, dom: Derivation, cod: Derivation) -> Derivation:
    w = expect(left_wf, KindWf, "left kind")
    d = expect(dom, Subkind, "domain")
    c = expect(cod, Subkind, "codomain")
    if not isinstance(w.kind, DArr):
        raise PreconditionError("left kind is not an arrow")
    agree(w.kind.dom, d.hi, "left domain")
    agree(w.kind.cod, c.lo, "left codomain")
    agree(c.ctx, extend(w.ctx, TpBind(d.lo)), "codomain context")
    return node("SK-DArr", Subkind(w.ctx, w.kind, DArr(d.lo, c.hi)), left_wf, dom, cod)


# ---------------------------------------------------------------- subtyping


def st_refl(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    return node("ST-Refl", Subtype(a.ctx, a.ty, a.ty, a.kind), d)


def st_trans(d1: Derivation, d2: Derivation) -> Derivation:
    a = expect(d1, Subtype, "left")
    b = expect(d2, Subtype, "right")
    agree((a.ctx, a.hi, a.kind), (b.ctx, b.lo, b.kind), "middle of the chain")
    return node("ST-Trans", Subtype(a.ctx, a.lo, b.hi, a.kind), d1, d2)


def trans_chain(*ds: Derivation) -> Derivation:
    out = ds[0]
    for d in ds[1:]:
        out = st_trans(out, d)
    return out


def st_top(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    if not isinstance(a.kind, Intv):
        raise PreconditionError("ST-Top needs an interval kind")
    return node("ST-Top", Subtype(a.ctx, a.ty, TOP, STAR), d)


def st_bot(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    if not isinstance(a.kind, Intv):
        raise PreconditionError("ST-Bot needs an interval kind")
    return node("ST-Bot", Subtype(a.ctx, BOT, a.ty, STAR), d)


def _beta_parts(body: Derivation, arg: Derivation):
    b = expect(body, Kinding, "body")
    a = expect(arg, Kinding, "argument")
    agree(b.ctx, extend(a.ctx, TpBind(a.kind)), "body context")
    redex = App(Lam(a.kind, b.ty), a.ty)
    return a.ctx, redex, subst_type(b.ty, 0, a.ty), subst_kind(b.kind, 0, a.ty)


def st_beta1(body: Derivation, arg: Derivation, *gray: Derivation) -> Derivation:
    ctx, redex, reduct, kind = _beta_parts(body, arg)
    return node("ST-Beta1", Subtype(ctx, redex, reduct, kind), body, arg, *gray)


def st_beta2(body: Derivation, arg: Derivation, *gray: Derivation) -> Derivation:
    ctx, redex, reduct, kind = _beta_parts(body, arg)
    return node("ST-Beta2", Subtype(ctx, reduct, redex, kind), body, arg, *gray)


def eta_expanded(a, dom):
    return Lam(dom, App(shift_type(a, 1), TpVar(0)))


def st_eta1(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    if not isinstance(a.kind, DArr):
        raise PreconditionError("η needs an arrow kind")
    return node("ST-Eta1", Subtype(a.ctx, eta_expanded(a.ty, a.kind.dom), a.ty, a.kind), d)


def st_eta2(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    if not isinstance(a.kind, DArr):
        raise PreconditionError("η needs an arrow kind")
    return node("ST-Eta2", Subtype(a.ctx, a.ty, eta_expanded(a.ty, a.kind.dom), a.kind), d)


def st_arr(dom: Derivation, cod: Derivation) -> Derivation:
    """``dom`` proves B1 <= A1, ``cod`` proves A2 <= B2; gives A1 -> A2 <= B1 -> B2."""
    d = expect(dom, Subtype, "domain")
    c = expect(cod, Subtype, "codomain")
    agree(d.ctx, c.ctx, "contexts")
    agree((d.kind, c.kind), (STAR, STAR), "component kinds and *")
    return node("ST-Arr", Subtype(d.ctx, Arr(d.hi, c.lo), Arr(d.lo, c.hi), STAR), dom, cod)


def st_all(left: Derivation, bound: Derivation, body: Derivation) -> Derivation:
    lft = expect(left, Kinding, "left universal")
    b = expect(bound, Subkind, "bound")
    s = expect(body, Subtype, "body")
    if not isinstance(lft.ty, All):
        raise PreconditionError("left side is not a universal")
    agree(lft.ty.kind, b.hi, "left bound")
    agree(lft.ty.body, s.lo, "left body")
    agree(s.ctx, extend(lft.ctx, TpBind(b.lo)), "body context")
    return node("ST-All", Subtype(lft.ctx, lft.ty, All(b.lo, s.hi), STAR), left, bound, body)


def st_abs(left: Derivation, right: Derivation, body: Derivation) -> Derivation:
    lft = expect(left, Kinding, "left abstraction")
    rgt = expect(right, Kinding, "right abstraction")
    agree(lft.kind, rgt.kind, "abstraction kinds")
    if not isinstance(lft.kind, DArr):
        raise PreconditionError("abstraction kind is not an arrow")
    return node("ST-Abs", Subtype(lft.ctx, lft.ty, rgt.ty, lft.kind), left, right, body)


def st_app(fn: Derivation, arg_eq: Derivation, *gray: Derivation) -> Derivation:
    f = expect(fn, Subtype, "operator")
    e = expect(arg_eq, TypeEq, "argument")
    if not isinstance(f.kind, DArr):
        raise PreconditionError("operator kind is not an arrow")
    agree(f.kind.dom, e.kind, "operator domain and argument kind")
    kind = subst_kind(f.kind.cod, 0, e.left)
    return node("ST-App", Subtype(f.ctx, App(f.lo, e.left), App(f.hi, e.right), kind),
                fn, arg_eq, *gray)


def st_bnd1(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    if not isinstance(a.kind, Intv):
        raise PreconditionError("bound projection needs an interval kind")
    return node("ST-Bnd1", Subtype(a.ctx, a.kind.lo, a.ty, STAR), d)


def st_bnd2(d: Derivation) -> Derivation:
    a = expect(d, Kinding, "premise")
    if not isinstance(a.kind, Intv):
        raise PreconditionError("bound projection needs an interval kind")
    return node("ST-Bnd2", Subtype(a.ctx, a.ty, a.kind.hi, STAR), d)


def st_intv(d: Derivation) -> Derivation:
    s = expect(d, Subtype, "premise")
    if not isinstance(s.kind, Intv):
        raise PreconditionError("ST-Intv needs an interval kind")
    return node("ST-Intv", Subtype(s.ctx, s.lo, s.hi, Intv(s.lo, s.hi)), d)


def st_sub(d: Derivation, sk: Derivation) -> Derivation:
    s = expect(d, Subtype, "subtyping")
    k = expect(sk, Subkind, "subkinding")
    agree((s.ctx, s.kind), (k.ctx, k.lo), "subtyping and subkinding")
    if k.lo == k.hi:
        return d
    return node("ST-Sub", Subtype(s.ctx, s.lo, s.hi, k.hi), d, sk)


def sk_antisym(fwd: Derivation, bwd: Derivation) -> Derivation:
    f = expect(fwd, Subkind, "forward")
    b = expect(bwd, Subkind, "backward")
    agree((f.ctx, f.lo, f.hi), (b.ctx, b.hi, b.lo), "the two inequations")
    return node("SK-AntiSym", KindEq(f.ctx, f.lo, f.hi), fwd, bwd)


def st_antisym(fwd: Derivation, bwd: Derivation) -> Derivation:
    f = expect(fwd, Subtype, "forward")
    b = expect(bwd, Subtype, "backward")
    agree((f.ctx, f.lo, f.hi, f.kind), (b.ctx, b.hi, b.lo, b.kind), "the two inequations")
    return node("ST-AntiSym", TypeEq(f.ctx, f.lo, f.hi, f.kind), fwd, bwd)
