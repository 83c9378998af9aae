"""Shape-level kinding: a syntax-directed certifier for η-long β-normal forms.

A ``ShapeContext`` lists the shapes of the type variables in scope, innermost
last. Non-normal input is a negative answer (``None``/``False``), never an
exception.
"""

from __future__ import annotations

from .syntax import (
    All, App, Arr, Bot, Context, DArr, Intv, Kind, Lam, SArr, STAR, Shape, Top, TpBind,
    TpVar, Type, erase_kind, to_spine,
)

ShapeContext = tuple  # tuple[Shape, ...]


def shape_context(ctx: Context) -> ShapeContext:
    return tuple(erase_kind(b.kind) for b in ctx if isinstance(b, TpBind))


def _lookup(gamma: ShapeContext, index: int) -> Shape | None:
    if 0 <= index < len(gamma):
        return gamma[len(gamma) - 1 - index]
    return None


def simple_wf_kind(gamma: ShapeContext, k: Kind) -> bool:
    match k:
        case Intv(lo, hi):
            return simple_kind_synth(gamma, lo) == STAR and simple_kind_synth(gamma, hi) == STAR
        case DArr(j, c):
            return simple_wf_kind(gamma, j) and simple_wf_kind(gamma + (erase_kind(j),), c)
    return False


def simple_kind_synth(gamma: ShapeContext, v: Type) -> Shape | None:
    match v:
        case Top() | Bot():
            return STAR
        case Arr(d, c):
            if simple_kind_synth(gamma, d) == STAR and simple_kind_synth(gamma, c) == STAR:
                return STAR
            return None
        case All(k, b):
            if simple_wf_kind(gamma, k) and simple_kind_synth(gamma + (erase_kind(k),), b) == STAR:
                return STAR
            return None
        case Lam(j, b):
            if not simple_wf_kind(gamma, j):
                return None
            body = simple_kind_synth(gamma + (erase_kind(j),), b)
            return None if body is None else SArr(erase_kind(j), body)
        case TpVar() | App():
            # neutrals are only normal at shape *
            return STAR if simple_ne_kind(gamma, v) == STAR else None
    return None


def simple_check(gamma: ShapeContext, v: Type, shape: Shape) -> bool:
    return simple_kind_synth(gamma, v) == shape


def simple_ne_kind(gamma: ShapeContext, n: Type) -> Shape | None:
    """Shape of a variable applied to a spine of normal types, at any shape."""
    elim = to_spine(n)
    if not isinstance(elim.head, TpVar):
        return None
    j = _lookup(gamma, elim.head.index)
    if j is None:
        return None
    return simple_spine_kind(gamma, j, elim.spine)


def simple_spine_kind(gamma: ShapeContext, j: Shape, spine) -> Shape | None:
    for u in spine:
        if not isinstance(j, SArr) or simple_kind_synth(gamma, u) != j.dom:
            return None
        j = j.cod
    return j


# ---------------------------------------------------------------- derived rules


def spine_concat_kind(gamma: ShapeContext, j: Shape, left, right) -> Shape | None:
    """Spine kinding of a concatenation, threading the middle shape."""
    mid = simple_spine_kind(gamma, j, left)
    return None if mid is None else simple_spine_kind(gamma, mid, right)


def spine_snoc_kind(gamma: ShapeContext, j: Shape, spine, last: Type) -> Shape | None:
    return spine_concat_kind(gamma, j, spine, (last,))


def ne_app_kind(gamma: ShapeContext, n: Type, arg: Type) -> Shape | None:
    """If ``n`` is neutral at ``j -> k`` and ``arg`` has shape ``j``, ``n arg`` is at ``k``."""
    k = simple_ne_kind(gamma, n)
    if isinstance(k, SArr) and simple_kind_synth(gamma, arg) == k.dom:
        return k.cod
    return None


def is_normal_at(ctx: Context, v: Type, shape: Shape) -> bool:
    return simple_kind_synth(shape_context(ctx), v) == shape


__all__ = [
    "ShapeContext", "shape_context", "simple_wf_kind", "simple_kind_synth", "simple_check",
    "simple_ne_kind", "simple_spine_kind", "spine_concat_kind", "spine_snoc_kind",
    "ne_app_kind", "is_normal_at",
]
