"""Hereditary substitution and reducing application.

Both functions recurse on the shape first and on the target second, so they
terminate on every raw input, including ill-kinded ones. Clauses that cannot
reduce (a non-abstraction applied at an arrow shape, arguments left over at
shape ``*``) fall back to plain application.

Types are handled in tree form; the head/spine decomposition is recomputed at
each node. ``Elim`` values and spine tuples are accepted and returned in the
same sort.
"""

from __future__ import annotations

from .reduction import FuelExhausted, beta_reduce
from .syntax import (
    All, App, Arr, Bot, DArr, Elim, Intv, Kind, Lam, SArr, Shape, Top, TpVar, Type, apply_spine,
    erase_kind, from_spine, shift_type, subst, to_spine,
)


def hsubst(target, var: int, shape: Shape, payload):
    """Replace type variable ``var`` by ``payload`` in ``target``, reducing as it goes.

    ``payload`` is scoped in the result context (``var`` removed).
    """
    if isinstance(payload, Elim):
        payload = from_spine(payload)
    if isinstance(target, Elim):
        return to_spine(_hsubst_type(from_spine(target), var, shape, payload))
    if isinstance(target, tuple):
        return hsubst_spine(target, var, shape, payload)
    if isinstance(target, (Intv, DArr)):
        return hsubst_kind(target, var, shape, payload)
    return _hsubst_type(target, var, shape, payload)


def _hsubst_type(a: Type, var: int, shape: Shape, payload: Type) -> Type:
    elim = to_spine(a)
    head = elim.head
    spine = hsubst_spine(elim.spine, var, shape, payload)
    match head:
        case TpVar(i):
            if i == var:
                return rapp_spine(payload, shape, spine)
            return apply_spine(TpVar(i - 1) if i > var else head, spine)
        case Top() | Bot():
            return apply_spine(head, spine)
        case Arr(d, c):
            new_head = Arr(_hsubst_type(d, var, shape, payload),
                           _hsubst_type(c, var, shape, payload))
        case All(k, b):
            new_head = All(hsubst_kind(k, var, shape, payload),
                           _hsubst_type(b, var + 1, shape, shift_type(payload, 1)))
        case Lam(k, b):
            new_head = Lam(hsubst_kind(k, var, shape, payload),
                           _hsubst_type(b, var + 1, shape, shift_type(payload, 1)))
        case _:
            raise TypeError(f"not a type: {a!r}")
    return apply_spine(new_head, spine)


def hsubst_spine(spine: tuple, var: int, shape: Shape, payload: Type) -> tuple:
    return tuple(_hsubst_type(d, var, shape, payload) for d in spine)


def hsubst_kind(k: Kind, var: int, shape: Shape, payload: Type) -> Kind:
    match k:
        case Intv(lo, hi):
            return Intv(_hsubst_type(lo, var, shape, payload), _hsubst_type(hi, var, shape, payload))
        case DArr(j, c):
            return DArr(hsubst_kind(j, var, shape, payload),
                        hsubst_kind(c, var + 1, shape, shift_type(payload, 1)))
    raise TypeError(f"not a kind: {k!r}")


def rapp(fn: Type, shape: Shape, arg: Type) -> Type:
    """Apply ``fn`` (of shape ``shape``) to ``arg``, contracting a top-level abstraction."""
    if isinstance(fn, Elim):
        fn = from_spine(fn)
    if isinstance(arg, Elim):
        arg = from_spine(arg)
    if isinstance(shape, SArr) and isinstance(fn, Lam):
        return _hsubst_type(fn.body, 0, shape.dom, arg)
    return App(fn, arg)


def rapp_spine(fn: Type, shape: Shape, args) -> Type:
    """Reducing application of ``fn`` to a whole spine, consuming ``shape`` as it goes."""
    if isinstance(fn, Elim):
        fn = from_spine(fn)
    args = tuple(from_spine(x) if isinstance(x, Elim) else x for x in args)
    out = fn
    for n, arg in enumerate(args):
        if not isinstance(shape, SArr):
            return apply_spine(out, args[n:])
        out = rapp(out, shape, arg)
        shape = shape.cod
    return out


def hsubst_vs_subst_check(target, var: int, kind: Kind, payload: Type,
                          fuel: int = 10_000) -> bool | None:
    """Check that ordinary substitution β-reduces to the hereditary one.

    Both sides are β-normalized leftmost-outermost and compared up to α.
    Returns None (inconclusive) when either side runs out of fuel.
    """
    plain = subst(target, var, payload)
    here = hsubst(target, var, erase_kind(kind), payload)
    left = beta_reduce(plain, fuel)
    right = beta_reduce(here, fuel)
    if isinstance(left, FuelExhausted) or isinstance(right, FuelExhausted):
        return None
    return left[0] == right[0]


__all__ = [
    "hsubst", "hsubst_kind", "hsubst_spine", "rapp", "rapp_spine", "hsubst_vs_subst_check",
]
