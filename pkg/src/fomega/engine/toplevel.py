"""Transitivity-free subtyping of closed normal proper types.

The rules are syntax directed on the outermost constructors. Arrow components
and universal bounds are related in the empty context, where the canonical
engine has no variables to chase and so decides them structurally. Universal
bodies live under one binding; they are handed to the canonical engine with
the remaining fuel, and an inconclusive answer counts as false.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..derivations.judgments import Derivation, PreconditionError, TfSub
from ..simple import is_normal_at
from ..syntax import STAR, All, Arr, Bot, Top, TpBind, type_fv, type_size
from .canonical import DEFAULT_FUEL, Engine, OutOfFuel, _Deepening
from .trivalent import Yes


@dataclass(frozen=True, eq=False)
class TfResult:
    holds: bool
    witness: Derivation | None = None

    def __bool__(self) -> bool:
        return self.holds


def _require_closed_normal(v) -> None:
    if type_fv(v):
        raise PreconditionError("top-level subtyping needs closed types")
    if not is_normal_at((), v, STAR):
        raise PreconditionError("top-level subtyping needs normal proper types")


def tf_subtype(u, v, fuel: int = DEFAULT_FUEL) -> TfResult:
    """Decide ∅ ⊢ U <= V for closed normal proper types."""
    _require_closed_normal(u)
    _require_closed_normal(v)
    e = Engine(fuel)
    measure = type_size(u) + type_size(v)
    goal = TfSub(u, v)

    def solved(attempt):
        r = _Deepening(e).run(attempt)
        return r.witness if isinstance(r, Yes) else None

    try:
        if isinstance(v, Top):
            d = e.synth((), u)
            if d is not None:
                return TfResult(True, Derivation("TfST-Top", goal, (d,)))
        if isinstance(u, Bot):
            d = e.synth((), v)
            if d is not None:
                return TfResult(True, Derivation("TfST-Bot", goal, (d,)))
        if isinstance(u, Arr) and isinstance(v, Arr):
            assert type_size(v.dom) + type_size(u.dom) < measure
            dom = solved(lambda d: e.sub((), v.dom, u.dom, d))
            cod = None if dom is None else solved(lambda d: e.sub((), u.cod, v.cod, d))
            if cod is not None:
                return TfResult(True, Derivation("TfST-Arr", goal, (dom, cod)))
        if isinstance(u, All) and isinstance(v, All):
            left = e.synth((), u)
            bound = None if left is None else solved(lambda d: e.subkind((), v.kind, u.kind, d))
            inner = (TpBind(v.kind),)
            body = None if bound is None else solved(lambda d: e.sub(inner, u.body, v.body, d))
            if body is not None:
                return TfResult(True, Derivation("TfST-All", goal, (left, bound, body)))
    except OutOfFuel:
        pass
    return TfResult(False)


__all__ = ["TfResult", "tf_subtype"]
