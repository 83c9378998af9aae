"""η-expansion and bottom-up normalization of types, kinds and contexts."""

from __future__ import annotations

from .hereditary import hsubst
from .syntax import (
    All, App, Arr, Bot, Context, DArr, Intv, Kind, Lam, TmBind, Top, TpBind, TpVar, Type,
    erase_kind, extend, lookup_kind, shift_kind, shift_type, subst_type, type_fv,
)


def eta_expand(k: Kind, a: Type) -> Type:
    """η-long expansion of ``a`` at kind ``k``; arguments are expanded too."""
    match k:
        case Intv():
            return a
        case DArr(j, c):
            arg = eta_expand(shift_kind(j, 1), TpVar(0))
            return Lam(j, eta_expand(c, App(shift_type(a, 1), arg)))
    raise TypeError(f"not a kind: {k!r}")


def nf(ctx: Context, e):
    """Normal form of a type or kind. ``ctx`` must already be normalized."""
    if isinstance(e, (Intv, DArr)):
        return nf_kind(ctx, e)
    return nf_type(ctx, e)


def nf_type(ctx: Context, a: Type) -> Type:
    match a:
        case TpVar(i):
            k = lookup_kind(ctx, i)
            return a if k is None else eta_expand(k, a)
        case Top() | Bot():
            return a
        case Arr(d, c):
            return Arr(nf_type(ctx, d), nf_type(ctx, c))
        case All(k, b):
            k2 = nf_kind(ctx, k)
            return All(k2, nf_type(extend(ctx, TpBind(k2)), b))
        case Lam(k, b):
            k2 = nf_kind(ctx, k)
            return Lam(k2, nf_type(extend(ctx, TpBind(k2)), b))
        case App(f, x):
            f2 = nf_type(ctx, f)
            x2 = nf_type(ctx, x)
            if isinstance(f2, Lam):
                return hsubst(f2.body, 0, erase_kind(f2.kind), x2)
            return App(f2, x2)
    raise TypeError(f"not a type: {a!r}")


def nf_kind(ctx: Context, k: Kind) -> Kind:
    match k:
        case Intv(lo, hi):
            return Intv(nf_type(ctx, lo), nf_type(ctx, hi))
        case DArr(j, c):
            j2 = nf_kind(ctx, j)
            return DArr(j2, nf_kind(extend(ctx, TpBind(j2)), c))
    raise TypeError(f"not a kind: {k!r}")


def nf_ctx(ctx: Context) -> Context:
    out: Context = ()
    for b in ctx:
        if isinstance(b, TpBind):
            out = extend(out, TpBind(nf_kind(out, b.kind)))
        else:
            out = extend(out, TmBind(nf_type(out, b.ty)))
    return out


def normalize(ctx: Context, e):
    """Normalize the context, then ``e`` in it."""
    return nf(nf_ctx(ctx), e)


# ---------------------------------------------------------------- η-stripping
# Test infrastructure for comparing nf against plain β-normalization: it undoes
# η-expansions bottom-up so both sides land in βη-normal form.


def eta_strip(e):
    if isinstance(e, (Intv, DArr)):
        return _strip_kind(e)
    return _strip_type(e)


def _strip_type(a: Type) -> Type:
    match a:
        case TpVar() | Top() | Bot():
            return a
        case Arr(d, c):
            return Arr(_strip_type(d), _strip_type(c))
        case App(f, x):
            return App(_strip_type(f), _strip_type(x))
        case All(k, b):
            return All(_strip_kind(k), _strip_type(b))
        case Lam(k, b):
            k2 = _strip_kind(k)
            b2 = _strip_type(b)
            if isinstance(b2, App) and b2.arg == TpVar(0) and 0 not in type_fv(b2.fn):
                return subst_type(b2.fn, 0, TpVar(0))  # drop the unused binder
            return Lam(k2, b2)
    raise TypeError(f"not a type: {a!r}")


def _strip_kind(k: Kind) -> Kind:
    match k:
        case Intv(lo, hi):
            return Intv(_strip_type(lo), _strip_type(hi))
        case DArr(j, c):
            return DArr(_strip_kind(j), _strip_kind(c))
    raise TypeError(f"not a kind: {k!r}")
