"""Exhaustive search for declarative subtyping derivations of bounded depth.

An independent oracle for the top-level procedure. Depth counts subtyping
and subkinding rule applications. Inputs are closed well-kinded proper types,
so kinding premises hold by construction, and bound variables are used at
their declared kinds only. The middle type of a transitivity step ranges over
a finite universe: subterms of the goal, Top, Bot, the proper variables in
scope and their bounds.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..syntax import (
    BOT, TOP, All, App, Arr, Bot, DArr, Intv, Top, TpBind, TpVar, extend, lookup_kind,
    type_depth,
)


def _subterms(a, out: set) -> None:
    out.add(a)
    if isinstance(a, Arr):
        _subterms(a.dom, out)
        _subterms(a.cod, out)
    elif isinstance(a, App):
        _subterms(a.fn, out)
        _subterms(a.arg, out)


def _universe(ctx, a, b) -> tuple:
    out: set = {TOP, BOT}
    _subterms(a, out)
    _subterms(b, out)
    for i in range(type_depth(ctx)):
        k = lookup_kind(ctx, i)
        if isinstance(k, Intv):
            out.add(TpVar(i))
            _subterms(k.lo, out)
            _subterms(k.hi, out)
    return tuple(sorted(out, key=repr))


def _var_bounds(ctx, a):
    if isinstance(a, TpVar):
        k = lookup_kind(ctx, a.index)
        if isinstance(k, Intv):
            return k
    return None


@lru_cache(maxsize=None)
def provable(ctx, a, b, depth: int) -> bool:
    """Is there a derivation of Γ ⊢ A <= B : * of at most ``depth`` rule levels?"""
    if depth <= 0:
        return False
    if a == b or isinstance(b, Top) or isinstance(a, Bot):
        return True
    d = depth - 1
    kb = _var_bounds(ctx, b)
    if kb is not None and kb.lo == a:
        return True
    ka = _var_bounds(ctx, a)
    if ka is not None and ka.hi == b:
        return True
    if d <= 0:
        return False
    if isinstance(a, Arr) and isinstance(b, Arr):
        if provable(ctx, b.dom, a.dom, d) and provable(ctx, a.cod, b.cod, d):
            return True
    if isinstance(a, All) and isinstance(b, All):
        if subkind(ctx, b.kind, a.kind, d) and provable(extend(ctx, TpBind(b.kind)), a.body, b.body, d):
            return True
    if isinstance(a, App) and isinstance(b, App) and a.fn == b.fn and d > 1:
        if provable(ctx, a.arg, b.arg, d - 1) and provable(ctx, b.arg, a.arg, d - 1):
            return True
    for w in _universe(ctx, a, b):
        if w in (a, b):
            continue
        if provable(ctx, a, w, d) and provable(ctx, w, b, d):
            return True
    return False


@lru_cache(maxsize=None)
def subkind(ctx, j, k, depth: int) -> bool:
    if depth <= 0:
        return False
    d = depth - 1
    if isinstance(j, Intv) and isinstance(k, Intv):
        return provable(ctx, k.lo, j.lo, d) and provable(ctx, j.hi, k.hi, d)
    if isinstance(j, DArr) and isinstance(k, DArr):
        return subkind(ctx, k.dom, j.dom, d) and subkind(extend(ctx, TpBind(k.dom)), j.cod, k.cod, d)
    return False


def closed_normal_types(max_size: int) -> list:
    """All closed normal proper types up to ``max_size`` whose universals bind proper variables."""
    by_size: dict[int, list] = {}

    def proper(size: int, depth: int) -> list:
        key = (size, depth)
        if key in by_size:
            return by_size[key]
        out: list = []
        if size == 1:
            out = [TOP, BOT] + [TpVar(i) for i in range(depth)]
        else:
            for left in range(1, size - 1):
                right = size - 1 - left
                for x, y in itertools.product(proper(left, depth), proper(right, depth)):
                    out.append(Arr(x, y))
            for lo_size in range(1, size - 3):
                for hi_size in range(1, size - 2 - lo_size):
                    body_size = size - 2 - lo_size - hi_size
                    if body_size < 1:
                        continue
                    for lo, hi in itertools.product(proper(lo_size, depth), proper(hi_size, depth)):
                        for body in proper(body_size, depth + 1):
                            out.append(All(Intv(lo, hi), body))
        by_size[key] = out
        return out

    result: list = []
    for s in range(1, max_size + 1):
        result.extend(proper(s, 0))
    return result


__all__ = ["provable", "subkind", "closed_normal_types"]
