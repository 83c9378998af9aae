"""Derived forms: kind constants, higher-order intervals, extrema, bounded binders.

These are expansion functions over the kernel syntax, not new AST nodes.
Going under the binder of an arrow kind shifts ``A`` and ``B``; that shift is
what makes the bound variable fresh for them.
"""

from __future__ import annotations

from .syntax import (
    BOT, TOP, App, All, DArr, Intv, Kind, Lam, TmTAbs, Term, TpVar, Type, shift_type,
)


def star() -> Kind:
    return Intv(BOT, TOP)


def empty_kind() -> Kind:
    return Intv(TOP, BOT)


def singleton(a: Type) -> Kind:
    return Intv(a, a)


def ho_interval(a: Type, k: Kind, b: Type) -> Kind:
    """The interval between ``a`` and ``b`` lifted to the structure of ``k``."""
    match k:
        case Intv():
            return Intv(a, b)
        case DArr(j, c):
            x = TpVar(0)
            return DArr(j, ho_interval(App(shift_type(a, 1), x), c, App(shift_type(b, 1), x)))
    raise TypeError(f"not a kind: {k!r}")


def ho_singleton(a: Type, k: Kind) -> Kind:
    return ho_interval(a, k, a)


def kmax(k: Kind) -> Kind:
    match k:
        case Intv():
            return star()
        case DArr(j, c):
            return DArr(j, kmax(c))
    raise TypeError(f"not a kind: {k!r}")


def tmax(k: Kind) -> Type:
    match k:
        case Intv():
            return TOP
        case DArr(j, c):
            return Lam(j, tmax(c))
    raise TypeError(f"not a kind: {k!r}")


def tmin(k: Kind) -> Type:
    match k:
        case Intv():
            return BOT
        case DArr(j, c):
            return Lam(j, tmin(c))
    raise TypeError(f"not a kind: {k!r}")


def weak_eta(k: Kind, a: Type) -> Type:
    """Expand ``a`` to the arity of ``k`` without expanding the arguments."""
    match k:
        case Intv():
            return a
        case DArr(j, c):
            return Lam(j, weak_eta(c, App(shift_type(a, 1), TpVar(0))))
    raise TypeError(f"not a kind: {k!r}")


def bound_kind(upper: Type, k: Kind) -> Kind:
    """The kind of variables bounded above by ``upper`` at kind ``k``."""
    return ho_interval(tmin(k), k, upper)


def bounded_all(upper: Type, k: Kind, body: Type) -> Type:
    return All(bound_kind(upper, k), body)


def bounded_darr(upper: Type, j: Kind, cod: Kind) -> Kind:
    return DArr(bound_kind(upper, j), cod)


def bounded_tabs(upper: Type, k: Kind, body: Term) -> Term:
    return TmTAbs(bound_kind(upper, k), body)


def bounded_lam(upper: Type, k: Kind, body: Type) -> Type:
    return Lam(bound_kind(upper, k), body)
