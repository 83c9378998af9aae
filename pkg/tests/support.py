"""Instance generators shared by the property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

from fomega.derivations import admissible as A
from fomega.derivations import rules as R
from fomega.derivations.judgments import PreconditionError
from fomega.derivations.transform import ctx_wf_of, weaken1
from fomega.derivations.validity import kinding_validity, to_star
from fomega.engine.generate import TypeGen, _Dead, gen_context
from fomega.normalizer import nf_ctx, nf_kind, nf_type
from fomega.sugar import kmax
from fomega.syntax import All, App, Arr, DArr, Intv, Lam, erase_kind, type_fv


@dataclass(frozen=True)
class Subst:
    """Γ ⊢ B : J and Γ, X:J ⊢ U : K, raw and normalized."""

    ctx: tuple
    b: object
    j: object
    u: object
    k: object
    nctx: tuple        # nf Γ
    v: object          # nf B
    e: object          # nf U in nf (Γ, X:J)

    @property
    def shape(self):
        return erase_kind(self.j)


@dataclass(frozen=True)
class Nested:
    """Γ ⊢ B : J, Γ, X:J ⊢ C : L and Γ, X:J, Y:L ⊢ U : K, all normalized."""

    nctx: tuple
    v: object
    j: object
    w: object
    l: object
    e: object
    k: object


def _require_use(rng, a, index: int) -> None:
    """Mostly reject samples where the substituted variable does not occur."""
    if index not in type_fv(a) and rng.random() < 0.9:
        raise _Dead


def _retry(seed: int, build):
    rng = random.Random(seed)
    for _ in range(2000):
        try:
            return build(rng)
        except (_Dead, PreconditionError):
            continue
    raise RuntimeError(f"no instance for seed {seed}")


def subst_instance(seed: int, size: int = 8) -> Subst:
    def build(rng):
        g = TypeGen(rng)
        cw = gen_context(rng, 6, 2)
        db = g.any(cw, max(2, size // 2))
        jd = kinding_validity(db)
        du = g.any(R.c_tpbind(cw, jd), size)
        _require_use(rng, du.conclusion.ty, 0)
        ctx, b, j = cw.conclusion.ctx, db.conclusion.ty, db.conclusion.kind
        u, k = du.conclusion.ty, du.conclusion.kind
        nctx = nf_ctx(ctx)
        return Subst(ctx, b, j, u, k, nctx, nf_type(nctx, b), nf_type(nf_ctx(du.conclusion.ctx), u))

    return _retry(seed, build)


def kind_instance(seed: int, size: int = 8):
    """(Γ, A, J, K) with Γ ⊢ A : J and Γ, X:J ⊢ K kd."""
    def build(rng):
        g = TypeGen(rng)
        cw = gen_context(rng, 6, 2)
        da = g.any(cw, max(2, size // 2))
        kd = g.kind(R.c_tpbind(cw, kinding_validity(da)), size)
        return cw.conclusion.ctx, da.conclusion.ty, da.conclusion.kind, kd.conclusion.kind

    return _retry(seed, build)


def nested_instance(seed: int, size: int = 8) -> Nested:
    def build(rng):
        g = TypeGen(rng)
        cw = gen_context(rng, 6, 2)
        db = g.any(cw, max(2, size // 3))
        cwx = R.c_tpbind(cw, kinding_validity(db))
        dc = g.any(cwx, max(2, size // 3))
        cwxy = R.c_tpbind(cwx, kinding_validity(dc))
        du = g.any(cwxy, size)
        _require_use(rng, du.conclusion.ty, 0)
        _require_use(rng, du.conclusion.ty, 1)
        nctx = nf_ctx(cw.conclusion.ctx)
        return Nested(
            nctx,
            nf_type(nctx, db.conclusion.ty), db.conclusion.kind,
            nf_type(nf_ctx(cwx.conclusion.ctx), dc.conclusion.ty), dc.conclusion.kind,
            nf_type(nf_ctx(cwxy.conclusion.ctx), du.conclusion.ty), du.conclusion.kind,
        )

    return _retry(seed, build)


def loosen(a, rng: random.Random):
    """A weakly equal copy: some operator domain annotations are replaced by
    kinds of the same shape."""
    match a:
        case Lam(k, body):
            k2 = kmax(k) if rng.random() < 0.5 else k
            return Lam(k2, loosen(body, rng))
        case All(k, body):
            return All(_loosen_kind(k, rng), loosen(body, rng))
        case Arr(d, c):
            return Arr(loosen(d, rng), loosen(c, rng))
        case App(f, x):
            return App(loosen(f, rng), loosen(x, rng))
    return a


def _loosen_kind(k, rng):
    if isinstance(k, Intv):
        return Intv(loosen(k.lo, rng), loosen(k.hi, rng))
    if isinstance(k, DArr):
        return DArr(_loosen_kind(k.dom, rng), _loosen_kind(k.cod, rng))
    return k


def normal_kind(ctx, k):
    return nf_kind(nf_ctx(ctx), k)


# ---------------------------------------------------------------- admissible rules


def sing_le(d):
    """For Γ ⊢ A : K, a derivation of A ..K A <= K."""
    if not isinstance(d.conclusion.kind, DArr):
        return R.sk_intv(R.st_bnd1(d), R.st_bnd2(d))
    dom = kinding_validity(d).premises[0]
    return R.sk_darr(A.wf_ho_intv(d, d), A.refl_subkind(dom), sing_le(A.apply_bound_var(d, dom)))


def admissible_battery(d) -> dict:
    """Every admissible constructor applied to premises built from Γ ⊢ A : K."""
    kd = kinding_validity(d)
    cw = ctx_wf_of(d)
    out = {}
    keq = out["kindeq_refl"] = A.kindeq_refl(kd)
    out["refl_subkind"] = A.refl_subkind(kd)
    out["kindeq_sym"] = A.kindeq_sym(keq)
    out["kindeq_trans"] = A.kindeq_trans(keq, keq)
    out["sk_refl_keq"] = A.sk_refl_keq(keq)
    out["wf_kmax"] = A.wf_kmax(kd)
    out["sk_kmax"] = A.sk_kmax(kd)
    out["trans_subkind"] = A.trans_subkind(out["refl_subkind"], out["sk_kmax"])
    out["k_tmax"] = A.k_tmax(kd)
    out["k_tmin"] = A.k_tmin(kd)
    out["st_tmax"] = A.st_tmax(d)
    out["st_tmin"] = A.st_tmin(d)
    out["k_ho_sing"] = A.k_ho_sing(d)
    eq = out["teq_refl"] = A.teq_refl(d)
    out["teq_sym"] = A.teq_sym(eq)
    out["teq_trans"] = A.teq_trans(eq, eq)
    out["st_refl_teq"] = A.st_refl_teq(eq)
    out["k_conv"] = A.k_conv(d, keq)
    out["st_conv"] = A.st_conv(out["st_refl_teq"], keq)
    out["teq_conv"] = A.teq_conv(eq, keq)
    wide = R.k_sub(d, out["sk_kmax"])
    bound = out["wf_ho_intv"] = A.wf_ho_intv(out["k_tmin"], wide)
    out["sk_ho_intv"] = A.sk_ho_intv(R.st_refl(out["k_tmin"]), A.st_tmax(d))
    out["k_all_bnd"] = A.k_all_bnd(d, R.k_top(R.c_tpbind(cw, bound)))

    # λX:K. X applied to A, and the operator itself
    xw = R.c_tpbind(cw, kd)
    body = R.k_var(xw, 0)
    lam = R.k_abs(kd, body)
    out["teq_beta"] = A.teq_beta(body, d)
    out["teq_abs"] = A.teq_abs(lam, lam, A.teq_refl(body))
    out["teq_app"] = A.teq_app(A.teq_refl(lam), eq)
    out["keq_darr"] = A.keq_darr(keq, A.kindeq_refl(kinding_validity(body)))
    out["teq_all"] = A.teq_all(keq, A.teq_refl(R.k_top(xw)))
    out["funct_type"] = A.funct_type(body, out["teq_beta"])
    out["funct_kind"] = A.funct_kind(kinding_validity(body), out["teq_beta"])
    if isinstance(d.conclusion.kind, DArr):
        out["teq_eta"] = A.teq_eta(d)
        out["apply_bound_var"] = A.apply_bound_var(d, kd.premises[0])
    else:
        star_eq = A.teq_refl(to_star(d))
        out["teq_sing"] = A.teq_sing(eq)
        out["teq_arr"] = A.teq_arr(star_eq, star_eq)
        out["keq_intv"] = A.keq_intv(star_eq, star_eq)

    # bound projections for a variable G : F ..K F with F : K
    f = R.k_var(xw, 0)
    sing_wf = A.wf_ho_intv(f, f)
    g = R.k_var(R.c_tpbind(xw, sing_wf), 0)
    f1 = weaken1(f, sing_wf)
    g_at_k = R.k_sub(g, weaken1(sing_le(f), sing_wf))
    out["st_ho_bnd1"] = A.st_ho_bnd1(g_at_k, f1, g)
    out["st_ho_bnd2"] = A.st_ho_bnd2(g_at_k, f1, g)

    # bounded type abstraction over the identity on Top, then instantiation at A
    bw = R.c_tpbind(cw, bound)
    top = R.k_top(bw)
    ident = R.t_abs(top, top, R.t_var(R.c_tmbind(bw, top), 0))
    tabs = out["t_tabs_bnd"] = A.t_tabs_bnd(d, ident)
    out["t_tapp_bnd"] = A.t_tapp_bnd(tabs, R.st_refl(d))
    top0 = R.k_top(cw)
    ident0 = R.t_abs(top0, top0, R.t_var(R.c_tmbind(cw, top0), 0))
    out["t_conv"] = A.t_conv(ident0, A.teq_refl(R.k_arr(top0, top0)))
    return out
