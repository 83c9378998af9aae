"""β-reduction on types and kinds, and call-by-value reduction on terms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .syntax import (
    All, App, Arr, Bot, DArr, Intv, Kind, Lam, TmAbs, TmApp, TmTAbs, TmTApp, Top,
    TpVar, Term, Type, subst_term, subst_type, subst_type_in_term,
)

DEFAULT_FUEL = 10_000

# A position is a path of child selectors from the root, e.g. ("fn", "body").
Position = tuple


@dataclass(frozen=True)
class FuelExhausted:
    """Reduction ran out of fuel; ``last`` is the final intermediate expression."""

    last: object
    steps: int


def contract(redex: Type) -> Type:
    assert isinstance(redex, App) and isinstance(redex.fn, Lam)
    return subst_type(redex.fn.body, 0, redex.arg)


def _children(e) -> list[tuple[str, object]]:
    match e:
        case TpVar() | Top() | Bot():
            return []
        case Arr(d, c):
            return [("dom", d), ("cod", c)]
        case All(k, b) | Lam(k, b):
            return [("kind", k), ("body", b)]
        case App(f, x):
            return [("fn", f), ("arg", x)]
        case Intv(lo, hi):
            return [("lo", lo), ("hi", hi)]
        case DArr(j, c):
            return [("dom", j), ("cod", c)]
    raise TypeError(f"not a type or kind: {e!r}")


def _redexes(e, pos: Position) -> Iterator[tuple[Position, Type]]:
    # pre-order with left children first gives leftmost-outermost order
    if isinstance(e, App) and isinstance(e.fn, Lam):
        yield pos, contract(e)
    for name, child in _children(e):
        yield from _redexes(child, pos + (name,))


def beta_redexes(e: Union[Type, Kind]) -> list[tuple[Position, Type]]:
    """Every β-redex position in ``e`` with its contractum, leftmost-outermost first."""
    return list(_redexes(e, ()))


def replace_at(e, pos: Position, new):
    if not pos:
        return new
    name, rest = pos[0], pos[1:]
    match e:
        case Arr(d, c):
            return Arr(replace_at(d, rest, new), c) if name == "dom" else Arr(d, replace_at(c, rest, new))
        case All(k, b):
            return All(replace_at(k, rest, new), b) if name == "kind" else All(k, replace_at(b, rest, new))
        case Lam(k, b):
            return Lam(replace_at(k, rest, new), b) if name == "kind" else Lam(k, replace_at(b, rest, new))
        case App(f, x):
            return App(replace_at(f, rest, new), x) if name == "fn" else App(f, replace_at(x, rest, new))
        case Intv(lo, hi):
            return Intv(replace_at(lo, rest, new), hi) if name == "lo" else Intv(lo, replace_at(hi, rest, new))
        case DArr(j, c):
            return DArr(replace_at(j, rest, new), c) if name == "dom" else DArr(j, replace_at(c, rest, new))
    raise ValueError(f"bad position {pos!r}")


def subterm_at(e, pos: Position):
    for name in pos:
        e = dict(_children(e))[name]
    return e


def beta_step(e):
    """Contract the leftmost-outermost redex, or return None if ``e`` is β-normal."""
    for pos, contractum in _redexes(e, ()):
        return replace_at(e, pos, contractum)
    return None


def beta_reduce(e, fuel: int = DEFAULT_FUEL):
    """Normalize ``e`` leftmost-outermost.

    Returns ``(normal_form, steps)`` or a ``FuelExhausted`` carrying the last
    expression reached.
    """
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    steps = 0
    while True:
        nxt = beta_step(e)
        if nxt is None:
            return e, steps
        if steps >= fuel:
            return FuelExhausted(e, steps)
        e = nxt
        steps += 1


def is_beta_normal(e) -> bool:
    return beta_step(e) is None


# ---------------------------------------------------------------- terms


def is_value(t: Term) -> bool:
    return isinstance(t, (TmAbs, TmTAbs))


def cbv_step(t: Term) -> Term | None:
    """One call-by-value step; None when ``t`` is a value or stuck."""
    match t:
        case TmApp(f, x):
            if not is_value(f):
                f2 = cbv_step(f)
                return None if f2 is None else TmApp(f2, x)
            if not is_value(x):
                x2 = cbv_step(x)
                return None if x2 is None else TmApp(f, x2)
            if isinstance(f, TmAbs):
                return subst_term(f.body, 0, x)
            return None
        case TmTApp(f, a):
            if not is_value(f):
                f2 = cbv_step(f)
                return None if f2 is None else TmTApp(f2, a)
            if isinstance(f, TmTAbs):
                return subst_type_in_term(f.body, 0, a)
            return None
    return None


def is_stuck(t: Term) -> bool:
    return not is_value(t) and cbv_step(t) is None
