"""Printing de Bruijn syntax back to the surface grammar.

Binders get fresh names that shadow nothing in scope, so the output parses
back to the same syntax. Sugar is not reintroduced: a bounded binder prints
as its interval expansion.
"""

from __future__ import annotations

from ..syntax import (
    All, App, Arr, Bot, DArr, Intv, Lam, TmAbs, TmApp, TmTAbs, TmTApp, TmVar, Top,
    TpBind, TpVar, kind_fv, TOP, BOT,
)

_TYPE_HINTS = ("X", "Y", "Z", "W")
_OP_HINTS = ("F", "G", "H")
_TERM_HINTS = ("x", "y", "z")


class Names:
    """Names in scope, outermost first, as (name, sort) pairs with sort "type" or "term"."""

    def __init__(self, entries=()) -> None:
        self.entries = tuple(entries)

    def taken(self) -> set:
        return {n for n, _ in self.entries}

    def fresh(self, hints) -> str:
        taken = self.taken()
        for h in hints:
            if h not in taken:
                return h
        i = 1
        while True:
            for h in hints:
                if f"{h}{i}" not in taken:
                    return f"{h}{i}"
            i += 1

    def push(self, name: str, sort: str) -> "Names":
        return Names(self.entries + ((name, sort),))

    def type_name(self, index: int) -> str:
        return self._name(index, "type")

    def term_name(self, index: int) -> str:
        return self._name(index, "term")

    def _name(self, index: int, sort: str) -> str:
        seen = 0
        for n, s in reversed(self.entries):
            if s == sort:
                if seen == index:
                    return n
                seen += 1
        raise ValueError(f"{sort} index {index} is free in the printed expression")


def names_for_context(ctx) -> Names:
    """Fresh names for every binding of a context."""
    names = Names()
    for b in ctx:
        if isinstance(b, TpBind):
            hints = _OP_HINTS if isinstance(b.kind, DArr) else _TYPE_HINTS
            names = names.push(names.fresh(hints), "type")
        else:
            names = names.push(names.fresh(_TERM_HINTS), "term")
    return names


def _binder(k) -> tuple:
    return _OP_HINTS if isinstance(k, DArr) else _TYPE_HINTS


def _is_star(k) -> bool:
    return isinstance(k, Intv) and k.lo == BOT and k.hi == TOP


def show_kind(k, names: Names) -> str:
    if _is_star(k):
        return "*"
    if isinstance(k, Intv):
        return f"{_ty(k.lo, names, 1)} .. {_ty(k.hi, names, 0)}"
    if isinstance(k, DArr):
        if 0 not in kind_fv(k.cod):
            inner = names.push("_", "type")
            return f"{_katom(k.dom, names)} -> {show_kind(k.cod, inner)}"
        x = names.fresh(_binder(k.dom))
        return f"({x} : {show_kind(k.dom, names)}) -> {show_kind(k.cod, names.push(x, 'type'))}"
    raise TypeError(f"not a kind: {k!r}")


def _katom(k, names: Names) -> str:
    s = show_kind(k, names)
    return s if _is_star(k) else f"({s})"


def show_type(a, names: Names | None = None) -> str:
    return _ty(a, names or Names(), 0)


def _ty(a, names: Names, level: int) -> str:
    """level 0: anything, 1: application operand on the left, 2: atom."""
    if isinstance(a, Top):
        return "Top"
    if isinstance(a, Bot):
        return "Bot"
    if isinstance(a, TpVar):
        return names.type_name(a.index)
    if isinstance(a, App):
        s = f"{_ty(a.fn, names, 1)} {_ty(a.arg, names, 2)}"
        return s if level <= 1 else f"({s})"
    if isinstance(a, Arr):
        s = f"{_ty(a.dom, names, 1)} -> {_ty(a.cod, names, 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(a, (All, Lam)):
        x = names.fresh(_binder(a.kind))
        word = "all" if isinstance(a, All) else "lam"
        s = f"{word} {x} : {show_kind(a.kind, names)}. {_ty(a.body, names.push(x, 'type'), 0)}"
        return s if level == 0 else f"({s})"
    raise TypeError(f"not a type: {a!r}")


def show_term(t, names: Names | None = None) -> str:
    return _tm(t, names or Names(), 0)


def _tm(t, names: Names, level: int) -> str:
    if isinstance(t, TmVar):
        return names.term_name(t.index)
    if isinstance(t, TmApp):
        s = f"{_tm(t.fn, names, 1)} {_tm(t.arg, names, 2)}"
        return s if level <= 1 else f"({s})"
    if isinstance(t, TmTApp):
        s = f"{_tm(t.fn, names, 1)} [{show_type(t.ty, names)}]"
        return s if level <= 1 else f"({s})"
    if isinstance(t, TmAbs):
        x = names.fresh(_TERM_HINTS)
        s = f"fun {x} : {show_type(t.ty, names)}. {_tm(t.body, names.push(x, 'term'), 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(t, TmTAbs):
        x = names.fresh(_binder(t.kind))
        s = f"tfun {x} : {show_kind(t.kind, names)}. {_tm(t.body, names.push(x, 'type'), 0)}"
        return s if level == 0 else f"({s})"
    raise TypeError(f"not a term: {t!r}")


def show(e, names: Names | None = None) -> str:
    """Print a type, kind or term."""
    names = names or Names()
    if isinstance(e, (Intv, DArr)):
        return show_kind(e, names)
    if isinstance(e, (TmVar, TmApp, TmTApp, TmAbs, TmTAbs)):
        return show_term(e, names)
    return show_type(e, names)


def show_decls(decls) -> str:
    """Print a declaration file; each item is printed under the names before it."""
    from .surface import Postulate, TypeDef

    lines = []
    names = Names()
    for it in decls.items:
        if isinstance(it, Postulate):
            lines.append(f"postulate {it.name} : {show_kind(it.kind, names)}")
            names = names.push(it.name, "type")
        elif isinstance(it, TypeDef) and it.body is None:
            lines.append(f"type {it.name} : {show_kind(it.kind, names)}")
            names = names.push(it.name, "type")
        elif isinstance(it, TypeDef):
            lines.append(f"type {it.name} : {show_kind(it.kind, names)} = {show_type(it.body, names)}")
        else:
            lines.append(f"def {it.name} : {show_type(it.ty, names)} = {show_term(it.term, names)}")
    return "\n".join(lines) + ("\n" if lines else "")


__all__ = ["Names", "names_for_context", "show", "show_kind", "show_type", "show_term",
           "show_decls"]
