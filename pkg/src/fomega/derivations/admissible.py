"""Admissible rules as derivation constructors.

Each function takes derivations of the rule's premises and returns a
derivation of its conclusion built from the primitive declarative rules only.
Constructions on higher-order kinds recurse on the kind, going under the
binder with weakening, a variable and an application, and closing with the
abstraction and η rules.
"""

from __future__ import annotations

from ..sugar import ho_interval
from ..syntax import DArr, Intv, TpBind, type_fv, kind_fv, type_depth
from .judgments import Derivation, KindEq, KindWf, Kinding, PreconditionError, TypeEq
from . import rules as R
from .transform import ctx_wf_of, narrow_top, subst_lemma, weaken1, weaken_to
from .validity import (
    kinding_validity, kindeq_validity, subkind_validity, subtype_validity, to_star,
    typeeq_validity, widen_star, wf_star,
)

# ---------------------------------------------------------------- order theory


def refl_subkind(kd: Derivation) -> Derivation:
    """Γ ⊢ K kd gives Γ ⊢ K <= K."""
    R.expect(kd, KindWf, "kind formation")
    if kd.rule == "Wf-Intv":
        lo, hi = kd.premises
        return R.sk_intv(R.st_refl(lo), R.st_refl(hi))
    dom, cod = kd.premises
    return R.sk_darr(kd, refl_subkind(dom), refl_subkind(cod))


def trans_subkind(d1: Derivation, d2: Derivation) -> Derivation:
    """Γ ⊢ J <= K and Γ ⊢ K <= L give Γ ⊢ J <= L, by recursion on K."""
    a, b = d1.conclusion, d2.conclusion
    if a.hi != b.lo or a.ctx != b.ctx:
        raise PreconditionError("subkinding chain does not meet in the middle")
    if d1.rule == "SK-Intv":
        l1, u1 = d1.premises
        l2, u2 = d2.premises
        return R.sk_intv(R.st_trans(l2, l1), R.st_trans(u1, u2))
    wf1, dom1, cod1 = d1.premises
    _, dom2, cod2 = d2.premises
    narrowed = narrow_top(cod1, dom2, subkind_validity(dom2)[0])
    return R.sk_darr(wf1, trans_subkind(dom2, dom1), trans_subkind(narrowed, cod2))


def kindeq_refl(kd: Derivation) -> Derivation:
    r = refl_subkind(kd)
    return R.sk_antisym(r, r)


def kindeq_sym(e: Derivation) -> Derivation:
    return R.sk_antisym(e.premises[1], e.premises[0])


def kindeq_trans(e1: Derivation, e2: Derivation) -> Derivation:
    return R.sk_antisym(trans_subkind(e1.premises[0], e2.premises[0]),
                        trans_subkind(e2.premises[1], e1.premises[1]))


def teq_refl(d: Derivation) -> Derivation:
    r = R.st_refl(d)
    return R.st_antisym(r, r)


def teq_sym(e: Derivation) -> Derivation:
    return R.st_antisym(e.premises[1], e.premises[0])


def teq_trans(e1: Derivation, e2: Derivation) -> Derivation:
    return R.st_antisym(R.st_trans(e1.premises[0], e2.premises[0]),
                        R.st_trans(e2.premises[1], e1.premises[1]))


def st_refl_teq(e: Derivation) -> Derivation:
    R.expect(e, TypeEq, "equation")
    return e.premises[0]


def sk_refl_keq(e: Derivation) -> Derivation:
    R.expect(e, KindEq, "equation")
    return e.premises[0]


# ---------------------------------------------------------------- conversion


def k_conv(d: Derivation, e: Derivation) -> Derivation:
    return R.k_sub(d, sk_refl_keq(e))


def st_conv(d: Derivation, e: Derivation) -> Derivation:
    return R.st_sub(d, sk_refl_keq(e))


def t_conv(d: Derivation, e: Derivation) -> Derivation:
    return R.t_sub(d, st_refl_teq(e))


def teq_conv(e: Derivation, ek: Derivation) -> Derivation:
    sk = sk_refl_keq(ek)
    return R.st_antisym(R.st_sub(e.premises[0], sk), R.st_sub(e.premises[1], sk))


# ---------------------------------------------------------------- congruences


def keq_intv(ea: Derivation, eb: Derivation) -> Derivation:
    """A1 = A2 : * and B1 = B2 : * give A1..B1 = A2..B2."""
    fwd = R.sk_intv(ea.premises[1], eb.premises[0])
    bwd = R.sk_intv(ea.premises[0], eb.premises[1])
    return R.sk_antisym(fwd, bwd)


def keq_darr(ej: Derivation, ek: Derivation) -> Derivation:
    """J1 = J2 and Γ, X:J1 ⊢ K1 = K2 give (X:J1) -> K1 = (X:J2) -> K2."""
    j1_wf, j2_wf = kindeq_validity(ej)
    k1_wf, k2_wf = subkind_validity(ek.premises[0])
    j2_le_j1 = ej.premises[1]
    fwd = R.sk_darr(R.wf_darr(j1_wf, k1_wf), j2_le_j1, narrow_top(ek.premises[0], j2_le_j1, j2_wf))
    k2_wf_narrow = narrow_top(k2_wf, j2_le_j1, j2_wf)
    bwd = R.sk_darr(R.wf_darr(j2_wf, k2_wf_narrow), ej.premises[0], ek.premises[1])
    return R.sk_antisym(fwd, bwd)


def teq_arr(ea: Derivation, eb: Derivation) -> Derivation:
    fwd = R.st_arr(ea.premises[1], eb.premises[0])
    bwd = R.st_arr(ea.premises[0], eb.premises[1])
    return R.st_antisym(fwd, bwd)


def teq_all(ek: Derivation, ea: Derivation) -> Derivation:
    """K1 = K2 and Γ, X:K1 ⊢ A1 = A2 : * give ∀X:K1.A1 = ∀X:K2.A2 : *."""
    k1_wf, k2_wf = kindeq_validity(ek)
    a1, a2 = typeeq_validity(ea)
    k2_le_k1 = ek.premises[1]
    fwd = R.st_all(R.k_all(k1_wf, a1), k2_le_k1, narrow_top(ea.premises[0], k2_le_k1, k2_wf))
    right = R.k_all(k2_wf, narrow_top(a2, k2_le_k1, k2_wf))
    bwd = R.st_all(right, ek.premises[0], ea.premises[1])
    return R.st_antisym(fwd, bwd)


def teq_abs(left: Derivation, right: Derivation, e: Derivation) -> Derivation:
    return R.st_antisym(R.st_abs(left, right, e.premises[0]), R.st_abs(right, left, e.premises[1]))


def teq_app(ea: Derivation, eb: Derivation) -> Derivation:
    """A1 = A2 : (X:J) -> K and B1 = B2 : J give A1 B1 = A2 B2 : K[X:=B1]."""
    fwd = R.st_app(ea.premises[0], eb)
    bwd = R.st_app(ea.premises[1], teq_sym(eb))
    if bwd.conclusion.kind != fwd.conclusion.kind:
        cod_wf = kinding_validity(typeeq_validity(ea)[0]).premises[1]
        bwd = R.st_sub(bwd, funct_kind(cod_wf, teq_sym(eb)).premises[0])
    return R.st_antisym(fwd, bwd)


def teq_sing(e: Derivation) -> Derivation:
    """A1 = A2 : B..C gives A1 = A2 : A1..A1."""
    fwd0, bwd0 = e.premises
    a1, a2 = (to_star(x) for x in subtype_validity(fwd0))
    wide_fwd, wide_bwd = widen_star(fwd0), widen_star(bwd0)
    fwd = R.st_sub(R.st_intv(fwd0), R.sk_intv(R.st_refl(a1), wide_bwd))
    bwd = R.st_sub(R.st_intv(bwd0), R.sk_intv(wide_fwd, R.st_refl(a1)))
    del a2
    return R.st_antisym(fwd, bwd)


def teq_beta(body: Derivation, arg: Derivation) -> Derivation:
    return R.st_antisym(R.st_beta1(body, arg), R.st_beta2(body, arg))


def teq_eta(d: Derivation) -> Derivation:
    return R.st_antisym(R.st_eta1(d), R.st_eta2(d))


# ---------------------------------------------------------------- extrema


def wf_kmax(kd: Derivation) -> Derivation:
    if kd.rule == "Wf-Intv":
        return wf_star(ctx_wf_of(kd))
    dom, cod = kd.premises
    return R.wf_darr(dom, wf_kmax(cod))


def sk_kmax(kd: Derivation) -> Derivation:
    """Γ ⊢ K kd gives Γ ⊢ K <= kmax K."""
    if kd.rule == "Wf-Intv":
        lo, hi = kd.premises
        return R.sk_intv(R.st_bot(lo), R.st_top(hi))
    dom, cod = kd.premises
    return R.sk_darr(kd, refl_subkind(dom), sk_kmax(cod))


def k_tmax(kd: Derivation) -> Derivation:
    if kd.rule == "Wf-Intv":
        return R.k_top(ctx_wf_of(kd))
    dom, cod = kd.premises
    return R.k_abs(dom, k_tmax(cod))


def k_tmin(kd: Derivation) -> Derivation:
    if kd.rule == "Wf-Intv":
        return R.k_bot(ctx_wf_of(kd))
    dom, cod = kd.premises
    return R.k_abs(dom, k_tmin(cod))


def apply_bound_var(d: Derivation, dom: Derivation) -> Derivation:
    """From Γ ⊢ A : (X:J) -> K build Γ, X:J ⊢ A X : K."""
    inner = R.c_tpbind(ctx_wf_of(d), dom)
    return R.k_app(weaken1(d, dom), R.k_var(inner, 0))


def _arrow_parts(d: Derivation):
    kd = kinding_validity(d)
    if kd.rule != "Wf-DArr":
        raise PreconditionError("expected an arrow kind")
    return kd, kd.premises[0], kd.premises[1]


def st_tmax(d: Derivation) -> Derivation:
    """Γ ⊢ A : K gives Γ ⊢ A <= tmax K : kmax K."""
    R.expect(d, Kinding, "premise")
    if isinstance(d.conclusion.kind, Intv):
        return R.st_top(d)
    kd, dom, cod = _arrow_parts(d)
    widened = R.k_sub(d, sk_kmax(kd))
    app = apply_bound_var(d, dom)
    lam = R.k_abs(dom, R.k_sub(app, sk_kmax(cod)))
    step = R.st_abs(lam, k_tmax(kd), st_tmax(app))
    return R.st_trans(R.st_eta2(widened), step)


def st_tmin(d: Derivation) -> Derivation:
    """Γ ⊢ A : K gives Γ ⊢ tmin K <= A : kmax K."""
    R.expect(d, Kinding, "premise")
    if isinstance(d.conclusion.kind, Intv):
        return R.st_bot(d)
    kd, dom, cod = _arrow_parts(d)
    widened = R.k_sub(d, sk_kmax(kd))
    app = apply_bound_var(d, dom)
    lam = R.k_abs(dom, R.k_sub(app, sk_kmax(cod)))
    step = R.st_abs(k_tmin(kd), lam, st_tmin(app))
    return R.st_trans(step, R.st_eta1(widened))


# ---------------------------------------------------------------- higher-order intervals


def wf_ho_intv(da: Derivation, db: Derivation) -> Derivation:
    """Γ ⊢ A : K and Γ ⊢ B : K give Γ ⊢ A ..K B kd."""
    a, b = da.conclusion, db.conclusion
    if a.kind != b.kind:
        raise PreconditionError("bounds live in different kinds")
    if isinstance(a.kind, Intv):
        return R.wf_intv(to_star(da), to_star(db))
    _, dom, _ = _arrow_parts(da)
    return R.wf_darr(dom, wf_ho_intv(apply_bound_var(da, dom), apply_bound_var(db, dom)))


def sk_ho_intv(d1: Derivation, d2: Derivation) -> Derivation:
    """Γ ⊢ A2 <= A1 : K and Γ ⊢ B1 <= B2 : K give A1 ..K B1 <= A2 ..K B2."""
    a, b = d1.conclusion, d2.conclusion
    if a.kind != b.kind:
        raise PreconditionError("bounds live in different kinds")
    if isinstance(a.kind, Intv):
        return R.sk_intv(widen_star(d1), widen_star(d2))
    left_wf = wf_ho_intv(subtype_validity(d1)[1], subtype_validity(d2)[0])
    dom = left_wf.premises[0]
    inner = R.c_tpbind(ctx_wf_of(d1), dom)
    x = teq_refl(R.k_var(inner, 0))
    d1x = R.st_app(weaken1(d1, dom), x)
    d2x = R.st_app(weaken1(d2, dom), x)
    return R.sk_darr(left_wf, refl_subkind(dom), sk_ho_intv(d1x, d2x))


def k_ho_sing(d: Derivation) -> Derivation:
    """Γ ⊢ A : K gives Γ ⊢ weak-η(K, A) : A ..K A."""
    R.expect(d, Kinding, "premise")
    if isinstance(d.conclusion.kind, Intv):
        return R.k_sing(d)
    _, dom, _ = _arrow_parts(d)
    return R.k_abs(dom, k_ho_sing(apply_bound_var(d, dom)))


def st_ho_bnd1(da: Derivation, db1: Derivation, dab: Derivation) -> Derivation:
    """Γ ⊢ A : K, Γ ⊢ B1 : K, Γ ⊢ A : B1 ..K B2 give Γ ⊢ B1 <= A : K."""
    a, b1, ab = da.conclusion, db1.conclusion, dab.conclusion
    if a.kind != b1.kind or a.ty != ab.ty:
        raise PreconditionError("premises of the bound projection do not fit together")
    if ab.kind != ho_interval(b1.ty, a.kind, _upper_of(ab.kind, a.kind)):
        raise PreconditionError("third premise is not an interval over the first kind")
    if isinstance(a.kind, Intv):
        proj = R.st_intv(R.st_bnd1(dab))
        return R.st_sub(proj, R.sk_intv(R.st_bnd1(db1), R.st_bnd2(da)))
    _, dom, _ = _arrow_parts(da)
    app_a, app_b = apply_bound_var(da, dom), apply_bound_var(db1, dom)
    ih = st_ho_bnd1(app_a, app_b, apply_bound_var(dab, dom))
    mid = R.st_abs(R.k_abs(dom, app_b), R.k_abs(dom, app_a), ih)
    return R.trans_chain(R.st_eta2(db1), mid, R.st_eta1(da))


def st_ho_bnd2(da: Derivation, db2: Derivation, dab: Derivation) -> Derivation:
    """Γ ⊢ A : K, Γ ⊢ B2 : K, Γ ⊢ A : B1 ..K B2 give Γ ⊢ A <= B2 : K."""
    a, b2, ab = da.conclusion, db2.conclusion, dab.conclusion
    if a.kind != b2.kind or a.ty != ab.ty:
        raise PreconditionError("premises of the bound projection do not fit together")
    if _upper_of(ab.kind, a.kind) != b2.ty:
        raise PreconditionError("third premise does not have the given upper bound")
    if isinstance(a.kind, Intv):
        proj = R.st_intv(R.st_bnd2(dab))
        return R.st_sub(proj, R.sk_intv(R.st_bnd1(da), R.st_bnd2(db2)))
    _, dom, _ = _arrow_parts(da)
    app_a, app_b = apply_bound_var(da, dom), apply_bound_var(db2, dom)
    ih = st_ho_bnd2(app_a, app_b, apply_bound_var(dab, dom))
    mid = R.st_abs(R.k_abs(dom, app_a), R.k_abs(dom, app_b), ih)
    return R.trans_chain(R.st_eta2(da), mid, R.st_eta1(db2))


def _upper_of(ho, k):
    """Recover B from ``A ..K B`` (the arrow case unwraps ``B X``)."""
    from ..syntax import App, TpVar, shift_type
    if isinstance(k, Intv):
        if not isinstance(ho, Intv):
            raise PreconditionError("interval shape mismatch")
        return ho.hi
    if not isinstance(ho, DArr):
        raise PreconditionError("interval shape mismatch")
    inner = _upper_of(ho.cod, k.cod)
    if not isinstance(inner, App) or inner.arg != TpVar(0) or 0 in type_fv(inner.fn):
        raise PreconditionError("upper bound is not an application to the bound variable")
    return shift_type(inner.fn, -1)


# ---------------------------------------------------------------- bounded quantification


def _bound_wf(da: Derivation) -> Derivation:
    kd = kinding_validity(da)
    return wf_ho_intv(k_tmin(kd), R.k_sub(da, sk_kmax(kd)))


def k_all_bnd(da: Derivation, body: Derivation) -> Derivation:
    """Γ ⊢ A : K and Γ, X : tmin K ..K A ⊢ B : * give Γ ⊢ ∀X<=A:K. B : *."""
    return R.k_all(_bound_wf(da), body)


def t_tabs_bnd(da: Derivation, body: Derivation) -> Derivation:
    return R.t_tabs(_bound_wf(da), body)


def t_tapp_bnd(dt: Derivation, dca: Derivation) -> Derivation:
    """Γ ⊢ t : ∀X<=A:K. B and Γ ⊢ C <= A : K give Γ ⊢ t [weak-η C] : B[X := weak-η C]."""
    dc = subtype_validity(dca)[0]
    kd = kinding_validity(dc)
    widen = sk_kmax(kd)
    sk = sk_ho_intv(st_tmin(dc), R.st_sub(dca, widen))
    return R.t_tapp(dt, R.k_sub(k_ho_sing(dc), sk))


# ---------------------------------------------------------------- functionality

_FUNCT_LIMIT = 400


def funct_kind(kd: Derivation, eq: Derivation) -> Derivation:
    """Γ, X:J, Δ ⊢ K kd and Γ ⊢ B1 = B2 : J give Γ, Δ[B1] ⊢ K[B1] = K[B2]."""
    return _Funct(eq).go(kd)


def funct_type(d: Derivation, eq: Derivation) -> Derivation:
    """Γ, X:J, Δ ⊢ A : K and Γ ⊢ B1 = B2 : J give Γ, Δ[B1] ⊢ A[B1] = A[B2] : K[B1]."""
    return _Funct(eq).go(d)


class _Funct:
    def __init__(self, eq: Derivation) -> None:
        R.expect(eq, TypeEq, "equation")
        self.eq = eq
        self.pos = len(eq.conclusion.ctx)
        self.b1, self.b2 = typeeq_validity(eq)
        self.calls = 0

    def sub1(self, d: Derivation) -> Derivation:
        return subst_lemma(d, self.pos, self.b1)

    def var_depth(self, d: Derivation) -> int:
        return type_depth(d.conclusion.ctx[self.pos + 1:])

    def go(self, d: Derivation) -> Derivation:
        self.calls += 1
        if self.calls > _FUNCT_LIMIT:
            raise PreconditionError("functionality construction did not converge")
        c = d.conclusion
        if len(c.ctx) <= self.pos or c.ctx[self.pos] != TpBind(self.eq.conclusion.kind):
            raise PreconditionError("derivation does not bind the equated variable")
        x = self.var_depth(d)
        if isinstance(c, KindWf):
            if x not in kind_fv(c.kind):
                return kindeq_refl(self.sub1(d))
            if d.rule == "Wf-Intv":
                return keq_intv(self.go(d.premises[0]), self.go(d.premises[1]))
            return keq_darr(self.go(d.premises[0]), self.go(d.premises[1]))
        R.expect(d, Kinding, "premise")
        if x not in type_fv(c.ty):
            return teq_refl(self.sub1(d))
        p = d.premises
        match d.rule:
            case "K-Var":
                return weaken_to(self.eq, self.sub1(p[0]))
            case "K-Arr":
                return teq_arr(self.go(p[0]), self.go(p[1]))
            case "K-All":
                return teq_all(self.go(p[0]), self.go(p[1]))
            case "K-Abs":
                core = R.k_abs(p[0], p[1])
                left = self.sub1(core)
                right = subst_lemma(core, self.pos, self.b2)
                if right.conclusion.kind != left.conclusion.kind:
                    keq = self.go(kinding_validity(core))
                    right = R.k_sub(right, keq.premises[1])
                return teq_abs(left, right, self.go(p[1]))
            case "K-App":
                return teq_app(self.go(p[0]), self.go(p[1]))
            case "K-Sing":
                return teq_sing(self.go(p[0]))
            case "K-Sub":
                e = self.go(p[0])
                sk = self.sub1(p[1])
                return R.st_antisym(R.st_sub(e.premises[0], sk), R.st_sub(e.premises[1], sk))
        raise PreconditionError(f"no functionality case for {d.rule}")


__all__ = [
    "refl_subkind", "trans_subkind", "kindeq_refl", "kindeq_sym", "kindeq_trans", "teq_refl",
    "teq_sym", "teq_trans", "st_refl_teq", "sk_refl_keq", "k_conv", "st_conv", "t_conv",
    "teq_conv", "keq_intv", "keq_darr", "teq_all", "teq_arr", "teq_abs", "teq_app",
    "teq_sing", "teq_beta", "teq_eta", "wf_kmax", "sk_kmax", "k_tmax", "k_tmin", "st_tmax",
    "st_tmin", "wf_ho_intv", "sk_ho_intv", "k_ho_sing", "st_ho_bnd1", "st_ho_bnd2",
    "k_all_bnd", "t_tabs_bnd", "t_tapp_bnd", "funct_kind", "funct_type", "apply_bound_var",
]
