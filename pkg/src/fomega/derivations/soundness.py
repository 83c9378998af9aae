"""Translation of canonical subtyping derivations into declarative ones.

The translation follows the canonical tree rule by rule for subtyping,
subkinding, type equality and kind checking. Kind synthesis premises are
rebuilt by declarative kinding along the syntax of the subject. Canonical
rules substitute hereditarily while the declarative ones substitute plainly;
when the two disagree on a kind (an operator variable applied inside a
substituted kind), the translation raises ``PreconditionError`` instead of
inserting the β-conversions that would reconcile them.
"""

from __future__ import annotations

from ..syntax import DArr, Intv, Lam, TpBind, extend
from . import rules as R
from . import search as S
from .judgments import Derivation, PreconditionError
from .validity import widen_star


class _Translate:
    def __init__(self) -> None:
        self._cw: dict = {}
        self._kw: dict = {}

    def cw(self, ctx) -> Derivation:
        d = self._cw.get(ctx)
        if d is None:
            d = S.ctx_wf(ctx)
            if d is None:
                raise PreconditionError("context is not well-formed")
            self._cw[ctx] = d
        return d

    def kind_wf(self, ctx, k) -> Derivation:
        key = (ctx, k)
        d = self._kw.get(key)
        if d is None:
            d = S.kind_wf(self.cw(ctx), k)
            if d is None:
                raise PreconditionError("kind is not well-formed")
            self._kw[key] = d
        return d

    # ------------------------------------------------------------ kinding

    def synth_at(self, ctx, v, k) -> Derivation:
        """Γ ⊢ V : K where K is the kind canonical synthesis gave V."""
        if isinstance(v, Lam) and isinstance(k, DArr):
            body = self.synth_at(extend(ctx, TpBind(v.kind)), v.body, k.cod)
            return R.k_abs(self.kind_wf(ctx, v.kind), body)
        d = S.synth(self.cw(ctx), v)
        if d is None:
            raise PreconditionError("no declarative kinding for the subject")
        if d.conclusion.kind == k:
            return d
        if k == Intv(v, v) and isinstance(d.conclusion.kind, Intv):
            return R.k_sing(d)
        raise PreconditionError("canonical and declarative kinds differ")

    def check(self, d: Derivation) -> Derivation:
        """CKindCheck(Γ, V, K) to Kinding(Γ, V, K)."""
        c = d.conclusion
        if d.rule == "CK-Sub":
            ds, sk = d.premises
            return R.k_sub(self.synth_at(c.ctx, c.ty, ds.conclusion.kind), self.subkind(sk))
        return self.synth_at(c.ctx, c.ty, c.kind)

    # ------------------------------------------------------------ subkinding

    def subkind(self, d: Derivation) -> Derivation:
        c = d.conclusion
        if d.rule == "CSK-Intv":
            lo, hi = d.premises
            return R.sk_intv(self.sub(lo), self.sub(hi))
        if d.rule == "CSK-DArr":
            _, dom, cod = d.premises
            return R.sk_darr(self.kind_wf(c.ctx, c.lo), self.subkind(dom), self.subkind(cod))
        raise PreconditionError(f"unexpected subkinding rule {d.rule}")

    # ------------------------------------------------------------ subtyping

    def sub(self, d: Derivation) -> Derivation:
        """CSubProper(Γ, U, V) to Subtype(Γ, U, V, *)."""
        c = d.conclusion
        ctx = c.ctx
        match d.rule:
            case "CST-Top":
                return R.st_top(self.star(ctx, c.lo))
            case "CST-Bot":
                return R.st_bot(self.star(ctx, c.hi))
            case "CST-Arr":
                dom, cod = d.premises
                return R.st_arr(self.sub(dom), self.sub(cod))
            case "CST-All":
                _, bound, body = d.premises
                return R.st_all(self.star(ctx, c.lo), self.subkind(bound), self.sub(body))
            case "CST-Bnd1":
                return R.st_bnd1(self.neutral(d.premises[0]))
            case "CST-Bnd2":
                return R.st_bnd2(self.neutral(d.premises[0]))
            case "CST-Trans":
                return R.st_trans(self.sub(d.premises[0]), self.sub(d.premises[1]))
            case "CST-Ne":
                dv, sp = d.premises
                cur = R.st_refl(R.k_var(self.cw(ctx), dv.conclusion.var))
                for eq in self.spine(sp):
                    cur = R.st_app(cur, eq)
                return widen_star(cur)
        raise PreconditionError(f"unexpected subtyping rule {d.rule}")

    def star(self, ctx, a) -> Derivation:
        d = S.synth_star(self.cw(ctx), a)
        if d is None:
            raise PreconditionError("no declarative kinding for a proper type")
        return d

    def neutral(self, d: Derivation) -> Derivation:
        c = d.conclusion
        return self.synth_at(c.ctx, c.ty, c.kind)

    def spine(self, d: Derivation) -> list:
        out = []
        while d.rule == "SpEq-Cons":
            head, d = d.premises
            out.append(self.type_eq(head))
        return out

    def type_eq(self, d: Derivation) -> Derivation:
        _, fwd, bwd = d.premises
        return R.st_antisym(self.subcheck(fwd), self.subcheck(bwd))

    def subcheck(self, d: Derivation) -> Derivation:
        """CSubCheck(Γ, U, V, K) to Subtype(Γ, U, V, K)."""
        if d.rule == "CST-Intv":
            du, dv, s = d.premises
            ku, kv = self.check(du), self.check(dv)
            tight = R.st_intv(self.sub(s))
            return R.st_sub(tight, R.sk_intv(R.st_bnd1(ku), R.st_bnd2(kv)))
        if d.rule == "CST-Abs":
            du, dv, body = d.premises
            return R.st_abs(self.check(du), self.check(dv), self.subcheck(body))
        raise PreconditionError(f"unexpected rule {d.rule}")


def declarative_subtype(d: Derivation) -> Derivation:
    """Γ ⊢ U <= V : * from a canonical derivation of Γ ⊢ U <= V."""
    return _Translate().sub(d)


def declarative_kinding(d: Derivation) -> Derivation:
    """Γ ⊢ V : K from a canonical derivation of Γ ⊢ V ⇐ K."""
    return _Translate().check(d)


def declarative_subkind(d: Derivation) -> Derivation:
    return _Translate().subkind(d)


__all__ = ["declarative_subtype", "declarative_kinding", "declarative_subkind"]
