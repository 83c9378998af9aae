"""Term typing and call-by-value evaluation.

Typing synthesizes a type bottom-up. Applications normalize the function's
type, promote a neutral type to its upper bound until an arrow or universal
head appears, and decide argument compatibility with the canonical engine.
A declarative derivation is assembled alongside; when the small declarative
prover cannot justify a subsumption step the type is still returned, with no
derivation.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..derivations import rules as R
from ..derivations import search as S
from ..derivations.judgments import Derivation, PreconditionError
from ..normalizer import nf_ctx, nf_kind, nf_type
from ..reduction import FuelExhausted, cbv_step, is_value
from ..syntax import (
    All, Arr, Intv, TmAbs, TmApp, TmBind, TmTAbs, TmTApp, TmVar, TpBind, extend, is_neutral,
    lookup_type, subst_type,
)
from .canonical import DEFAULT_FUEL, Engine, OutOfFuel, _Deepening
from .trivalent import Yes

_PROMOTIONS = 16
STAR_KIND = R.STAR


@dataclass(frozen=True, eq=False)
class Typed:
    ty: object
    derivation: Derivation | None

    def __iter__(self):
        return iter((self.ty, self.derivation))


class _Fail(Exception):
    pass


class _Typer:
    def __init__(self, fuel: int) -> None:
        self.engine = Engine(fuel)

    def decide(self, attempt) -> bool:
        return isinstance(_Deepening(self.engine).run(attempt), Yes)

    def promote(self, nctx, ty, want):
        """Chase upper bounds of a normal type until its head is ``want``."""
        for _ in range(_PROMOTIONS):
            if isinstance(ty, want):
                return ty
            if not is_neutral(ty):
                return None
            try:
                dn = self.engine.ne(nctx, ty)
            except OutOfFuel:
                return None
            if dn is None or not isinstance(dn.conclusion.kind, Intv):
                return None
            ty = dn.conclusion.kind.hi
        return None

    def go(self, ctx, cw, t) -> Typed:
        nctx = nf_ctx(ctx)
        match t:
            case TmVar(i):
                ty = lookup_type(ctx, i)
                if ty is None:
                    raise _Fail
                return Typed(ty, _maybe(lambda: R.t_var(cw, i)))
            case TmAbs(a, body):
                na = nf_type(nctx, a)
                if not self.decide(lambda d: self.engine.check(nctx, na, STAR_KIND, d)):
                    raise _Fail
                da = _maybe(lambda: S.synth_star(cw, a))
                inner = _maybe(lambda: R.c_tmbind(cw, da))
                b = self.go(extend(ctx, TmBind(a)), inner, body)
                db = _maybe(lambda: S.synth_star(cw, b.ty))
                return Typed(Arr(a, b.ty), _maybe(lambda: R.t_abs(da, db, b.derivation)))
            case TmTAbs(k, body):
                nk = nf_kind(nctx, k)
                try:
                    if self.engine.ckwf(nctx, nk) is None:
                        raise _Fail
                except OutOfFuel:
                    raise _Fail
                dk = _maybe(lambda: S.kind_wf(cw, k))
                inner = _maybe(lambda: R.c_tpbind(cw, dk))
                b = self.go(extend(ctx, TpBind(k)), inner, body)
                return Typed(All(k, b.ty), _maybe(lambda: R.t_tabs(dk, b.derivation)))
            case TmApp(f, x):
                ft = self.go(ctx, cw, f)
                arrow = self.promote(nctx, nf_type(nctx, ft.ty), Arr)
                if arrow is None:
                    raise _Fail
                xt = self.go(ctx, cw, x)
                nx = nf_type(nctx, xt.ty)
                if not self.decide(lambda d: self.engine.sub(nctx, nx, arrow.dom, d)):
                    raise _Fail
                df = _subsume(cw, ft, arrow)
                dx = _subsume(cw, xt, arrow.dom)
                return Typed(arrow.cod, _maybe(lambda: R.t_app(df, dx)))
            case TmTApp(f, c):
                ft = self.go(ctx, cw, f)
                univ = self.promote(nctx, nf_type(nctx, ft.ty), All)
                if univ is None:
                    raise _Fail
                nc = nf_type(nctx, c)
                if not self.decide(lambda d: self.engine.check(nctx, nc, univ.kind, d)):
                    raise _Fail
                df = _subsume(cw, ft, univ)
                dc = _maybe(lambda: _kind_at(cw, c, univ.kind))
                return Typed(subst_type(univ.body, 0, c), _maybe(lambda: R.t_tapp(df, dc)))
        raise _Fail


def _maybe(build):
    try:
        out = build()
    except (PreconditionError, TypeError, AttributeError):
        return None
    return out


def _kind_at(cw, c, k):
    d = S.synth(cw, c)
    kd = S.kind_wf(cw, k)
    return S.coerce(d, kd)


def _subsume(cw, typed: Typed, target) -> Derivation | None:
    d = typed.derivation
    if d is None:
        return None
    if typed.ty == target:
        return d

    def build():
        lo, hi = S.synth_star(cw, typed.ty), S.synth_star(cw, target)
        st = S.prove(lo, hi)
        return R.t_sub(d, st)

    return _maybe(build)


def type_synth_term(ctx, t, fuel: int = DEFAULT_FUEL) -> Typed | None:
    """Synthesize a type for ``t`` in ``ctx``; ``None`` when typing fails within fuel."""
    cw = S.ctx_wf(ctx)
    try:
        return _Typer(fuel).go(ctx, cw, t)
    except _Fail:
        return None


# ---------------------------------------------------------------- evaluation


@dataclass(frozen=True)
class Value:
    term: object
    steps: int


@dataclass(frozen=True)
class Stuck:
    term: object
    steps: int


def cbv_eval(t, fuel: int = DEFAULT_FUEL):
    """Run call-by-value steps until a value, a stuck term or the fuel limit."""
    steps = 0
    while True:
        if is_value(t):
            return Value(t, steps)
        if steps >= fuel:
            return FuelExhausted(t, steps)
        nxt = cbv_step(t)
        if nxt is None:
            return Stuck(t, steps)
        t = nxt
        steps += 1


__all__ = ["Typed", "type_synth_term", "Value", "Stuck", "FuelExhausted", "cbv_eval"]
