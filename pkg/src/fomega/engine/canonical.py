"""Goal-directed search in the canonical system.

Inputs are normal: contexts from ``nf_ctx``, types and kinds from ``nf``.
Kind synthesis is syntax directed. Subtyping of proper types tries, in order,
the Top and Bot rules, the structural rules, the neutral rule for a shared
head, bound chasing on neutral sides, and bound matching, which instantiates
a context variable of (possibly dependent arrow) interval kind so that one of
its bounds coincides with a side of the goal. Transitivity is used only in
those last two forms.

Search depth is increased step by step until a witness is found, the search
fails without ever being cut short (answer ``No``), or the fuel runs out
(answer ``Unknown``). Successful subgoals and definitive failures are memoized
per query.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..hereditary import hsubst_kind
from ..syntax import (
    All, App, Arr, Bot, DArr, Intv, Lam, Top, TpBind, TpVar, apply_spine,
    erase_kind, extend, is_neutral, kind_fv, lookup_kind, shift_kind, shift_type, to_spine,
    type_depth, type_fv,
)
from ..derivations.judgments import (
    CCtxWf, CKindCheck, CKindEq, CKindSynth, CKindWf, CNeKind, CSpineEq, CSpineKind,
    CSubCheck, CSubkind, CSubProper, CTypeEq, CVarKind, Derivation,
)
from .trivalent import No, Trivalent, Unknown, Yes

DEFAULT_FUEL = 10_000
UNIVERSE_LIMIT = 10


class OutOfFuel(Exception):
    pass


def _node(rule, conclusion, *premises):
    return Derivation(rule, conclusion, premises)


def _sing(v):
    return Intv(v, v)


class Engine:
    """One query's worth of search state: fuel, memo tables and the cut counter."""

    def __init__(self, fuel: int = DEFAULT_FUEL) -> None:
        self.fuel = fuel
        self.spent = 0
        self.cuts = 0
        self._ccwf: dict = {}
        self._ckwf: dict = {}
        self._synth: dict = {}
        self._succ: dict = {}
        self._fail: set = set()
        self._active: set = set()

    def tick(self) -> None:
        self.spent += 1
        if self.spent > self.fuel:
            raise OutOfFuel

    # ------------------------------------------------------------ formation and synthesis

    def ccwf(self, ctx) -> Derivation | None:
        if ctx in self._ccwf:
            return self._ccwf[ctx]
        out = None
        if ctx == ():
            out = _node("CC-Empty", CCtxWf(()))
        else:
            g, b = ctx[:-1], ctx[-1]
            dg = self.ccwf(g)
            if dg is not None:
                if isinstance(b, TpBind):
                    dk = self.ckwf(g, b.kind)
                    if dk is not None:
                        out = _node("CC-TpBind", CCtxWf(ctx), dg, dk)
                else:
                    dt = self.synth(g, b.ty)
                    if dt is not None and dt.conclusion.kind == _sing(b.ty):
                        out = _node("CC-TmBind", CCtxWf(ctx), dg, dt)
        self._ccwf[ctx] = out
        return out

    def ckwf(self, ctx, k, depth: int = 6) -> Derivation | None:
        key = (ctx, k)
        if key in self._ckwf:
            return self._ckwf[key]
        out = None
        if isinstance(k, Intv):
            lo, hi = self.synth(ctx, k.lo, depth), self.synth(ctx, k.hi, depth)
            if lo is not None and hi is not None and lo.conclusion.kind == _sing(k.lo) \
                    and hi.conclusion.kind == _sing(k.hi):
                out = _node("CWf-Intv", CKindWf(ctx, k), lo, hi)
        elif isinstance(k, DArr):
            dom = self.ckwf(ctx, k.dom, depth)
            cod = None if dom is None else self.ckwf(extend(ctx, TpBind(k.dom)), k.cod, depth)
            if cod is not None:
                out = _node("CWf-DArr", CKindWf(ctx, k), dom, cod)
        if out is not None:
            self._ckwf[key] = out
        return out

    def synth(self, ctx, v, depth: int = 6) -> Derivation | None:
        key = (ctx, v)
        if key in self._synth:
            return self._synth[key]
        self.tick()
        out = self._synth_new(ctx, v, depth)
        if out is not None:
            self._synth[key] = out
        return out

    def _synth_new(self, ctx, v, depth):
        match v:
            case Top() | Bot():
                cw = self.ccwf(ctx)
                if cw is None:
                    return None
                return _node("CK-Top" if isinstance(v, Top) else "CK-Bot",
                             CKindSynth(ctx, v, _sing(v)), cw)
            case Arr(a, b):
                da, db = self.synth(ctx, a, depth), self.synth(ctx, b, depth)
                if da is None or db is None or da.conclusion.kind != _sing(a) \
                        or db.conclusion.kind != _sing(b):
                    return None
                return _node("CK-Arr", CKindSynth(ctx, v, _sing(v)), da, db)
            case All(k, b):
                dk = self.ckwf(ctx, k, depth)
                if dk is None:
                    return None
                db = self.synth(extend(ctx, TpBind(k)), b, depth)
                if db is None or db.conclusion.kind != _sing(b):
                    return None
                return _node("CK-All", CKindSynth(ctx, v, _sing(v)), dk, db)
            case Lam(k, b):
                dk = self.ckwf(ctx, k, depth)
                if dk is None:
                    return None
                db = self.synth(extend(ctx, TpBind(k)), b, depth)
                if db is None:
                    return None
                return _node("CK-Abs", CKindSynth(ctx, v, DArr(k, db.conclusion.kind)), dk, db)
        if is_neutral(v):
            dn = self.ne(ctx, v, depth)
            if dn is None or not isinstance(dn.conclusion.kind, Intv):
                return None
            return _node("CK-Sing", CKindSynth(ctx, v, _sing(v)), dn)
        return None

    def var(self, ctx, index: int) -> Derivation | None:
        k = lookup_kind(ctx, index)
        cw = self.ccwf(ctx)
        if k is None or cw is None:
            return None
        return _node("CV-Var", CVarKind(ctx, index, k), cw)

    def ne(self, ctx, n, depth: int = 6) -> Derivation | None:
        e = to_spine(n)
        if not isinstance(e.head, TpVar):
            return None
        dv = self.var(ctx, e.head.index)
        if dv is None:
            return None
        ds = self.spine_kind(ctx, dv.conclusion.kind, e.spine, depth)
        if ds is None:
            return None
        return _node("CK-Ne", CNeKind(ctx, n, ds.conclusion.result), dv, ds)

    def spine_kind(self, ctx, k, spine, depth: int = 6) -> Derivation | None:
        if not spine:
            return _node("CK-Empty", CSpineKind(ctx, k, (), k))
        if not isinstance(k, DArr):
            return None
        u = spine[0]
        du = self.check(ctx, u, k.dom, depth)
        if du is None:
            return None
        dd = self.ckwf(ctx, k.dom, depth)
        if dd is None:
            return None
        cod = hsubst_kind(k.cod, 0, erase_kind(k.dom), u)
        rest = self.spine_kind(ctx, cod, spine[1:], depth)
        if rest is None:
            return None
        return _node("CK-Cons", CSpineKind(ctx, k, tuple(spine), rest.conclusion.result),
                     du, dd, rest)

    def check(self, ctx, v, k, depth: int = 6) -> Derivation | None:
        ds = self.synth(ctx, v, depth)
        if ds is None:
            return None
        sk = self.subkind(ctx, ds.conclusion.kind, k, depth)
        if sk is None:
            return None
        return _node("CK-Sub", CKindCheck(ctx, v, k), ds, sk)

    # ------------------------------------------------------------ subkinding and equality

    def subkind(self, ctx, j, k, depth: int) -> Derivation | None:
        self.tick()
        if isinstance(j, Intv) and isinstance(k, Intv):
            lo = self.sub(ctx, k.lo, j.lo, depth)
            hi = None if lo is None else self.sub(ctx, j.hi, k.hi, depth)
            if hi is None:
                return None
            return _node("CSK-Intv", CSubkind(ctx, j, k), lo, hi)
        if isinstance(j, DArr) and isinstance(k, DArr):
            wf = self.ckwf(ctx, j, depth)
            dom = None if wf is None else self.subkind(ctx, k.dom, j.dom, depth)
            cod = None if dom is None else self.subkind(extend(ctx, TpBind(k.dom)), j.cod, k.cod, depth)
            if cod is None:
                return None
            return _node("CSK-DArr", CSubkind(ctx, j, k), wf, dom, cod)
        return None

    def kind_eq(self, ctx, j, k, depth: int) -> Derivation | None:
        wj, wk = self.ckwf(ctx, j, depth), self.ckwf(ctx, k, depth)
        if wj is None or wk is None:
            return None
        fwd = self.subkind(ctx, j, k, depth)
        bwd = None if fwd is None else self.subkind(ctx, k, j, depth)
        if bwd is None:
            return None
        return _node("CSK-AntiSym", CKindEq(ctx, j, k), wj, wk, fwd, bwd)

    def subcheck(self, ctx, u, v, k, depth: int) -> Derivation | None:
        self.tick()
        du = self.check(ctx, u, k, depth)
        dv = None if du is None else self.check(ctx, v, k, depth)
        if dv is None:
            return None
        if isinstance(k, Intv):
            s = self.sub(ctx, u, v, depth)
            if s is None:
                return None
            return _node("CST-Intv", CSubCheck(ctx, u, v, k), du, dv, s)
        if isinstance(u, Lam) and isinstance(v, Lam):
            body = self.subcheck(extend(ctx, TpBind(k.dom)), u.body, v.body, k.cod, depth)
            if body is None:
                return None
            return _node("CST-Abs", CSubCheck(ctx, u, v, k), du, dv, body)
        return None

    def type_eq(self, ctx, u, v, k, depth: int) -> Derivation | None:
        wk = self.ckwf(ctx, k, depth)
        if wk is None:
            return None
        fwd = self.subcheck(ctx, u, v, k, depth)
        bwd = None if fwd is None else self.subcheck(ctx, v, u, k, depth)
        if bwd is None:
            return None
        return _node("CST-AntiSym", CTypeEq(ctx, u, v, k), wk, fwd, bwd)

    def spine_eq(self, ctx, k, left, right, depth: int) -> Derivation | None:
        if not left and not right:
            return _node("SpEq-Empty", CSpineEq(ctx, k, (), (), k))
        if not left or not right or not isinstance(k, DArr):
            return None
        head = self.type_eq(ctx, left[0], right[0], k.dom, depth)
        if head is None:
            return None
        cod = hsubst_kind(k.cod, 0, erase_kind(k.dom), left[0])
        tail = self.spine_eq(ctx, cod, left[1:], right[1:], depth)
        if tail is None:
            return None
        return _node("SpEq-Cons", CSpineEq(ctx, k, tuple(left), tuple(right), tail.conclusion.result),
                     head, tail)

    # ------------------------------------------------------------ subtyping of proper types

    def sub(self, ctx, u, v, depth: int) -> Derivation | None:
        key = (ctx, u, v)
        hit = self._succ.get(key)
        if hit is not None:
            return hit
        if key in self._fail:
            return None
        if depth <= 0 or key in self._active:
            self.cuts += 1
            return None
        self.tick()
        before = self.cuts
        self._active.add(key)
        try:
            out = self._sub(ctx, u, v, depth - 1)
        finally:
            self._active.discard(key)
        if out is not None:
            self._succ[key] = out
        elif self.cuts == before:
            self._fail.add(key)
        return out

    def _sub(self, ctx, u, v, depth):
        # structural rules pass the caller's depth on: their subgoals are
        # smaller, so only transitivity through bounds consumes depth
        goal = CSubProper(ctx, u, v)
        if isinstance(v, Top):
            du = self.synth(ctx, u, depth)
            if du is not None and du.conclusion.kind == _sing(u):
                return _node("CST-Top", goal, du)
        if isinstance(u, Bot):
            dv = self.synth(ctx, v, depth)
            if dv is not None and dv.conclusion.kind == _sing(v):
                return _node("CST-Bot", goal, dv)
        if isinstance(u, Arr) and isinstance(v, Arr):
            dom = self.sub(ctx, v.dom, u.dom, depth + 1)
            cod = None if dom is None else self.sub(ctx, u.cod, v.cod, depth + 1)
            if cod is not None:
                return _node("CST-Arr", goal, dom, cod)
        if isinstance(u, All) and isinstance(v, All):
            left = self.synth(ctx, u, depth)
            bound = None if left is None else self.subkind(ctx, v.kind, u.kind, depth)
            body = None if bound is None else self.sub(extend(ctx, TpBind(v.kind)), u.body, v.body, depth + 1)
            if body is not None:
                return _node("CST-All", goal, left, bound, body)
        nu, nv = is_neutral(u), is_neutral(v)
        if nu and nv:
            eu, ev = to_spine(u), to_spine(v)
            if eu.head == ev.head and len(eu.spine) == len(ev.spine):
                dv = self.var(ctx, eu.head.index)
                if dv is not None:
                    sp = self.spine_eq(ctx, dv.conclusion.kind, eu.spine, ev.spine, depth + 1)
                    if sp is not None and isinstance(sp.conclusion.result, Intv):
                        return _node("CST-Ne", goal, dv, sp)
        exact = self._match_bounds(ctx, u, v, depth, fill=False)
        if exact is not None:
            return exact
        if nu:
            dn = self.ne(ctx, u, depth)
            if dn is not None and isinstance(dn.conclusion.kind, Intv):
                hi = dn.conclusion.kind.hi
                up = _node("CST-Bnd2", CSubProper(ctx, u, hi), dn)
                if hi == v:
                    return up
                if hi != u:
                    rest = self.sub(ctx, hi, v, depth)
                    if rest is not None:
                        return _node("CST-Trans", goal, up, rest)
        if nv:
            dn = self.ne(ctx, v, depth)
            if dn is not None and isinstance(dn.conclusion.kind, Intv):
                lo = dn.conclusion.kind.lo
                low = _node("CST-Bnd1", CSubProper(ctx, lo, v), dn)
                if lo == u:
                    return low
                if lo != v:
                    rest = self.sub(ctx, u, lo, depth)
                    if rest is not None:
                        return _node("CST-Trans", goal, rest, low)
        return self._match_bounds(ctx, u, v, depth, fill=True)

    # ------------------------------------------------------------ bound matching

    def _match_bounds(self, ctx, u, v, depth, fill: bool):
        """Instantiate a law-like variable so one of its bounds is a side of the goal.

        Without ``fill`` only instantiations fully determined by matching are
        tried; with it, the remaining pattern variables range over subterms of
        the goal.
        """
        goal = CSubProper(ctx, u, v)
        for index, n, lo, hi in _interval_vars(ctx):
            for forward in (True, False):
                first, second = (lo, hi) if forward else (hi, lo)
                theta = match_type(first, u if forward else v, n)
                if theta is None:
                    continue
                other = match_type(second, v if forward else u, n, dict(theta))
                if other is not None:
                    theta = other
                complete = len(theta) == n
                if complete == fill:
                    continue
                for args in self._instances(theta, n, u, v):
                    self.tick()
                    neutral = apply_spine(TpVar(index), args)
                    dn = self.ne(ctx, neutral, depth)
                    if dn is None or not isinstance(dn.conclusion.kind, Intv):
                        continue
                    nlo, nhi = dn.conclusion.kind.lo, dn.conclusion.kind.hi
                    low = _node("CST-Bnd1", CSubProper(ctx, nlo, neutral), dn)
                    up = _node("CST-Bnd2", CSubProper(ctx, neutral, nhi), dn)
                    through = _node("CST-Trans", CSubProper(ctx, nlo, nhi), low, up)
                    if forward:
                        if nlo != u or nhi == u:
                            continue
                        if nhi == v:
                            return _node("CST-Trans", goal, low, up) if neutral != v else low
                        rest = self.sub(ctx, nhi, v, depth)
                        if rest is not None:
                            return _node("CST-Trans", goal, through, rest)
                    else:
                        if nhi != v or nlo == v:
                            continue
                        rest = self.sub(ctx, u, nlo, depth)
                        if rest is not None:
                            return _node("CST-Trans", goal, rest, through)
        return None

    def _instances(self, theta, n, u, v):
        missing = [p for p in range(n) if p not in theta]
        if not missing:
            yield tuple(theta[p] for p in reversed(range(n)))
            return
        self.cuts += 1
        pool = _universe(u, v)
        for choice in itertools.product(pool, repeat=len(missing)):
            full = dict(theta)
            full.update(zip(missing, choice))
            yield tuple(full[p] for p in reversed(range(n)))


def _interval_vars(ctx):
    """Type variables whose kind is a chain of arrows ending in an interval.

    Yields (index, arity, lower bound, upper bound); the bounds live under ``arity`` binders.
    """
    for index in range(type_depth(ctx)):
        k = lookup_kind(ctx, index)
        n = 0
        while isinstance(k, DArr):
            k = k.cod
            n += 1
        if isinstance(k, Intv):
            yield index, n, k.lo, k.hi


def _universe(u, v):
    out: list = []
    stack = [u, v]
    while stack and len(out) < UNIVERSE_LIMIT:
        t = stack.pop(0)
        if t not in out:
            out.append(t)
        if isinstance(t, (App, Arr)):
            stack.extend((t.fn, t.arg) if isinstance(t, App) else (t.dom, t.cod))
    return out


def match_type(p, t, n: int, theta: dict | None = None, depth: int = 0,
               binders: tuple = ()) -> dict | None:
    """Matching of pattern ``p`` (with pattern variables 0..n-1 under ``depth``
    local binders) against ``t``.

    Matching is first order except for η-patterns: a pattern variable applied
    to the innermost local binders in order, as in ``lam Y. X Y``, is solved
    by abstracting ``t`` over those binders. ``binders`` holds the kinds of
    the local binders of ``t``, outermost first.
    """
    theta = {} if theta is None else theta
    eta = _eta_pattern(p, depth, n)
    if eta is not None:
        k, m = eta
        val = _abstract(t, depth, m, binders)
        return None if val is None else _bind(theta, k - depth, val)
    match p:
        case TpVar(k):
            if k < depth:
                return theta if t == TpVar(k) else None
            if k < depth + n:
                if any(i < depth for i in type_fv(t)):
                    return None
                return _bind(theta, k - depth, shift_type(t, -depth))
            return theta if t == TpVar(k - n) else None
        case Top() | Bot():
            return theta if t == p else None
        case Arr(a, b):
            if not isinstance(t, Arr):
                return None
            theta = match_type(a, t.dom, n, theta, depth, binders)
            return None if theta is None else match_type(b, t.cod, n, theta, depth, binders)
        case App(f, a):
            if not isinstance(t, App):
                return None
            theta = match_type(f, t.fn, n, theta, depth, binders)
            return None if theta is None else match_type(a, t.arg, n, theta, depth, binders)
        case All(k, b) | Lam(k, b):
            if type(t) is not type(p):
                return None
            theta = match_kind(k, t.kind, n, theta, depth, binders)
            if theta is None:
                return None
            return match_type(b, t.body, n, theta, depth + 1, binders + (t.kind,))
    return None


def _bind(theta: dict, var: int, val) -> dict | None:
    prev = theta.get(var)
    if prev is not None and prev != val:
        return None
    theta[var] = val
    return theta


def _eta_pattern(p, depth: int, n: int):
    """(pattern variable, m) when ``p`` is that variable applied to local binders m-1, ..., 0."""
    args = []
    while isinstance(p, App):
        args.append(p.arg)
        p = p.fn
    if not args or not isinstance(p, TpVar) or not depth <= p.index < depth + n:
        return None
    m = len(args)
    if m > depth or any(a != TpVar(i) for i, a in enumerate(args)):
        return None
    return p.index, m


def _abstract(t, depth: int, m: int, binders: tuple):
    """``lam Y1 .. Ym. t`` over the innermost ``m`` local binders, moved outside all locals."""
    if len(binders) != depth:
        return None
    outer = depth - m
    if any(m <= i < depth for i in type_fv(t)):
        return None
    body = shift_type(t, -outer, m)
    for r in reversed(range(m)):
        k = binders[outer + r]
        if any(r <= i < r + outer for i in kind_fv(k)):
            return None
        body = Lam(shift_kind(k, -outer, r), body)
    return body


def match_kind(p, k, n: int, theta: dict, depth: int, binders: tuple = ()) -> dict | None:
    if isinstance(p, Intv) and isinstance(k, Intv):
        theta = match_type(p.lo, k.lo, n, theta, depth, binders)
        return None if theta is None else match_type(p.hi, k.hi, n, theta, depth, binders)
    if isinstance(p, DArr) and isinstance(k, DArr):
        theta = match_kind(p.dom, k.dom, n, theta, depth, binders)
        if theta is None:
            return None
        return match_kind(p.cod, k.cod, n, theta, depth + 1, binders + (k.dom,))
    return None


# ---------------------------------------------------------------- public entry points


@dataclass
class _Deepening:
    engine: Engine
    max_depth: int = 64

    def run(self, attempt) -> Trivalent:
        e = self.engine
        try:
            for depth in range(1, self.max_depth + 1):
                e.cuts = 0
                out = attempt(depth)
                if out is not None:
                    return Yes(out, e.spent)
                if e.cuts == 0:
                    return No(e.spent)
        except OutOfFuel:
            pass
        return Unknown(min(e.spent, e.fuel))


def subtype_fuel(ctx, u, v, fuel: int = DEFAULT_FUEL) -> Trivalent:
    """Canonical subtyping Γ ⊢ U <= V of normal proper types."""
    e = Engine(fuel)
    return _Deepening(e).run(lambda d: e.sub(ctx, u, v, d))


def subkind_fuel(ctx, j, k, fuel: int = DEFAULT_FUEL) -> Trivalent:
    e = Engine(fuel)
    return _Deepening(e).run(lambda d: e.subkind(ctx, j, k, d))


def kind_check_fuel(ctx, v, k, fuel: int = DEFAULT_FUEL) -> Trivalent:
    """Canonical kind checking Γ ⊢ V <= K."""
    e = Engine(fuel)
    return _Deepening(e).run(lambda d: e.check(ctx, v, k, d))


def subcheck_fuel(ctx, u, v, k, fuel: int = DEFAULT_FUEL) -> Trivalent:
    e = Engine(fuel)
    return _Deepening(e).run(lambda d: e.subcheck(ctx, u, v, k, d))


def kind_synth_derivation(ctx, v, fuel: int = DEFAULT_FUEL) -> Trivalent:
    e = Engine(fuel)
    return _Deepening(e).run(lambda d: e.synth(ctx, v, d))


def kind_synth(ctx, v, fuel: int = DEFAULT_FUEL):
    """The kind synthesized for a normal type, or ``None``."""
    r = kind_synth_derivation(ctx, v, fuel)
    return r.witness.conclusion.kind if isinstance(r, Yes) else None


def ctx_wf_canonical(ctx, fuel: int = DEFAULT_FUEL) -> Derivation | None:
    e = Engine(fuel)
    try:
        return e.ccwf(ctx)
    except OutOfFuel:
        return None


__all__ = [
    "DEFAULT_FUEL", "Engine", "OutOfFuel", "subtype_fuel", "subkind_fuel", "kind_check_fuel",
    "subcheck_fuel", "kind_synth", "kind_synth_derivation", "ctx_wf_canonical", "match_type",
]
