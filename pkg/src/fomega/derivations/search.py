"""Small proof search for the declarative system.

``synth`` builds a kinding derivation for a type by following its syntax,
inserting subsumption only at application arguments. ``prove`` is a
depth-bounded subtyping prover for proper types: reflexivity, the Top and Bot
rules, the structural rules, head β-steps and bound chasing through kinds.
Everything returned passes the checker; ``None`` means the search gave up.
"""

from __future__ import annotations

from ..syntax import (
    All, App, Arr, Bot, DArr, Intv, Lam, Top, TpBind, TpVar, extend, is_neutral, shift_kind,
)
from .judgments import Derivation, PreconditionError
from . import rules as R
from .validity import kinding_validity, to_star, widen_star, wf_star

DEFAULT_DEPTH = 8


def ctx_wf(ctx) -> Derivation | None:
    """A context-formation derivation for ``ctx``."""
    out = R.c_empty()
    for b in ctx:
        if isinstance(b, TpBind):
            kd = kind_wf(out, b.kind)
            if kd is None:
                return None
            out = R.c_tpbind(out, kd)
        else:
            d = synth(out, b.ty)
            d = None if d is None else coerce(d, wf_star(out))
            if d is None:
                return None
            out = R.c_tmbind(out, d)
    return out


def kind_wf(cw: Derivation, k) -> Derivation | None:
    ctx = cw.conclusion.ctx
    if isinstance(k, Intv):
        lo, hi = synth_star(cw, k.lo), synth_star(cw, k.hi)
        if lo is None or hi is None:
            return None
        return R.wf_intv(lo, hi)
    dom = kind_wf(cw, k.dom)
    if dom is None:
        return None
    cod = kind_wf(R.c_tpbind(cw, dom), k.cod)
    if cod is None:
        return None
    assert cod.conclusion.ctx == extend(ctx, TpBind(k.dom))
    return R.wf_darr(dom, cod)


def synth_star(cw: Derivation, a) -> Derivation | None:
    d = synth(cw, a)
    if d is None or not isinstance(d.conclusion.kind, Intv):
        return None
    return to_star(d)


def synth(cw: Derivation, a) -> Derivation | None:
    """Γ ⊢ A : K for the kind K read off A's syntax, or ``None``."""
    try:
        return _synth(cw, a)
    except PreconditionError:
        return None


def _synth(cw: Derivation, a) -> Derivation | None:
    match a:
        case TpVar(i):
            try:
                return R.k_var(cw, i)
            except PreconditionError:
                return None
        case Top():
            return R.k_top(cw)
        case Bot():
            return R.k_bot(cw)
        case Arr(d, c):
            dd, dc = synth_star(cw, d), synth_star(cw, c)
            return None if dd is None or dc is None else R.k_arr(dd, dc)
        case All(k, b):
            kd = kind_wf(cw, k)
            if kd is None:
                return None
            db = synth_star(R.c_tpbind(cw, kd), b)
            return None if db is None else R.k_all(kd, db)
        case Lam(k, b):
            kd = kind_wf(cw, k)
            if kd is None:
                return None
            db = synth(R.c_tpbind(cw, kd), b)
            return None if db is None else R.k_abs(kd, db)
        case App(f, x):
            df = synth(cw, f)
            if df is None or not isinstance(df.conclusion.kind, DArr):
                return None
            dx = synth(cw, x)
            if dx is None:
                return None
            dx = coerce(dx, kinding_validity(df).premises[0])
            return None if dx is None else R.k_app(df, dx)
    return None


# ---------------------------------------------------------------- coercion


def coerce(d: Derivation, target: Derivation, depth: int = DEFAULT_DEPTH) -> Derivation | None:
    """Turn Γ ⊢ A : K into Γ ⊢ A : K' for the kind K' of ``target`` (Γ ⊢ K' kd)."""
    c = d.conclusion
    t = target.conclusion.kind
    if c.kind == t:
        return d
    try:
        if isinstance(c.kind, Intv) and isinstance(t, Intv):
            tight = d if c.kind == Intv(c.ty, c.ty) else R.k_sing(d)
            a = to_star(d)
            lo = prove(target.premises[0], a, depth)
            hi = prove(a, target.premises[1], depth)
            if lo is None or hi is None:
                return None
            return R.k_sub(tight, R.sk_intv(lo, hi))
        sk = prove_subkind(kinding_validity(d), target, depth)
        return None if sk is None else R.k_sub(d, sk)
    except PreconditionError:
        return None


def prove_subkind(k1: Derivation, k2: Derivation, depth: int = DEFAULT_DEPTH) -> Derivation | None:
    """Γ ⊢ J <= K from formation derivations of J and K."""
    a, b = k1.conclusion.kind, k2.conclusion.kind
    try:
        if isinstance(a, Intv) and isinstance(b, Intv):
            lo = prove(k2.premises[0], k1.premises[0], depth)
            hi = prove(k1.premises[1], k2.premises[1], depth)
            return None if lo is None or hi is None else R.sk_intv(lo, hi)
        if isinstance(a, DArr) and isinstance(b, DArr):
            dom = prove_subkind(k2.premises[0], k1.premises[0], depth)
            if dom is None:
                return None
            inner = R.c_tpbind(ctx_wf_of_kd(k2), k2.premises[0])
            cod1 = kind_wf(inner, a.cod)
            if cod1 is None:
                return None
            cod = prove_subkind(cod1, k2.premises[1], depth)
            return None if cod is None else R.sk_darr(k1, dom, cod)
    except PreconditionError:
        return None
    return None


def ctx_wf_of_kd(kd: Derivation) -> Derivation:
    from .transform import ctx_wf_of
    return ctx_wf_of(kd)


# ---------------------------------------------------------------- subtyping of proper types


def prove(da: Derivation, db: Derivation, depth: int = DEFAULT_DEPTH) -> Derivation | None:
    """Γ ⊢ A <= B : * from Γ ⊢ A : * and Γ ⊢ B : *, or ``None``."""
    try:
        return _Prover().go(da, db, depth)
    except PreconditionError:
        return None


class _Prover:
    def __init__(self) -> None:
        self.active: set = set()

    def go(self, da: Derivation, db: Derivation, depth: int) -> Derivation | None:
        a, b = da.conclusion.ty, db.conclusion.ty
        if a == b:
            return R.st_refl(da)
        if isinstance(b, Top):
            return R.st_top(da)
        if isinstance(a, Bot):
            return R.st_bot(db)
        key = (da.conclusion.ctx, a, b)
        if depth <= 0 or key in self.active:
            return None
        self.active.add(key)
        try:
            return self._search(da, db, depth - 1)
        finally:
            self.active.discard(key)

    def _search(self, da, db, depth):
        a, b = da.conclusion.ty, db.conclusion.ty
        cw = _ctx_wf(da)
        if isinstance(a, Arr) and isinstance(b, Arr):
            dom = self._sub(cw, b.dom, a.dom, depth)
            cod = dom and self._sub(cw, a.cod, b.cod, depth)
            if dom and cod:
                return R.st_arr(dom, cod)
        if isinstance(a, All) and isinstance(b, All):
            out = self._all(cw, da, a, b, depth)
            if out is not None:
                return out
        for side in (0, 1):
            ty = (a, b)[side]
            if isinstance(ty, App):
                step = head_step(cw, ty)
                if step is not None:
                    fwd, bwd = (widen_star(s) for s in step)
                    if side == 0:
                        rest = self.go(subject_star(cw, fwd.conclusion.hi), db, depth)
                        if rest is not None:
                            return R.st_trans(fwd, rest)
                    else:
                        rest = self.go(da, subject_star(cw, bwd.conclusion.lo), depth)
                        if rest is not None:
                            return R.st_trans(rest, bwd)
        # bound chasing
        sa = synth(cw, a) if is_neutral(a) else None
        if sa is not None and isinstance(sa.conclusion.kind, Intv) and sa.conclusion.kind.hi != a:
            up = R.st_bnd2(sa)
            rest = self.go(_upper_star(cw, sa), db, depth)
            if rest is not None:
                return R.st_trans(up, rest)
        sb = synth(cw, b) if is_neutral(b) else None
        if sb is not None and isinstance(sb.conclusion.kind, Intv) and sb.conclusion.kind.lo != b:
            low = R.st_bnd1(sb)
            rest = self.go(da, _lower_star(cw, sb), depth)
            if rest is not None:
                return R.st_trans(rest, low)
        # detour through a variable whose lower bound is exactly A
        for i, k in _proper_vars(cw.conclusion.ctx):
            if k.lo == a and not (isinstance(a, TpVar) and a.index == i):
                dx = R.k_var(cw, i)
                rest = self.go(_upper_star(cw, dx), db, depth)
                if rest is not None:
                    return R.trans_chain(R.st_bnd1(dx), R.st_bnd2(dx), rest)
        return None

    def _sub(self, cw, a, b, depth):
        da, db = synth_star(cw, a), synth_star(cw, b)
        if da is None or db is None:
            return None
        return self.go(da, db, depth)

    def _all(self, cw, da, a, b, depth):
        k2 = kind_wf(cw, b.kind)
        k1 = kind_wf(cw, a.kind)
        if k1 is None or k2 is None:
            return None
        bound = prove_subkind(k2, k1, depth)
        if bound is None:
            return None
        inner = R.c_tpbind(cw, k2)
        body = self._sub(inner, a.body, b.body, depth)
        if body is None:
            return None
        return R.st_all(da if da.conclusion.kind == R.STAR else to_star(da), bound, body)


def _proper_vars(ctx):
    depth = 0
    for b in reversed(ctx):
        if isinstance(b, TpBind):
            if isinstance(b.kind, Intv):
                yield depth, shift_kind(b.kind, depth + 1)
            depth += 1


def _ctx_wf(d: Derivation) -> Derivation:
    from .transform import ctx_wf_of
    return ctx_wf_of(d)


def subject_star(cw: Derivation, a) -> Derivation:
    d = synth_star(cw, a)
    if d is None:
        raise PreconditionError("reduct does not kind")
    return d


def _upper_star(cw, d):
    kd = kinding_validity(d)
    return kd.premises[1]


def _lower_star(cw, d):
    kd = kinding_validity(d)
    return kd.premises[0]


def head_step(cw: Derivation, a) -> tuple[Derivation, Derivation] | None:
    """For A whose head is a β-redex, derivations of A <= A' and A' <= A at A's kind."""
    if not isinstance(a, App):
        return None
    f, x = a.fn, a.arg
    if isinstance(f, Lam):
        kd = kind_wf(cw, f.kind)
        if kd is None:
            return None
        body = synth(R.c_tpbind(cw, kd), f.body)
        arg = synth(cw, x)
        arg = None if arg is None else coerce(arg, kd)
        if body is None or arg is None:
            return None
        return R.st_beta1(body, arg), R.st_beta2(body, arg)
    inner = head_step(cw, f)
    if inner is None:
        return None
    fwd, bwd = inner
    dom = kinding_validity(synth(cw, f)).premises[0]
    dx = synth(cw, x)
    dx = None if dx is None else coerce(dx, dom)
    if dx is None:
        return None
    from .admissible import teq_refl
    eq = teq_refl(dx)
    return R.st_app(fwd, eq), R.st_app(bwd, eq)


__all__ = [
    "ctx_wf", "kind_wf", "synth", "synth_star", "coerce", "prove", "prove_subkind", "head_step",
]
