"""Judgment forms and derivation trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..syntax import Context, Kind, Term, Type

# ---------------------------------------------------------------- declarative


@dataclass(frozen=True)
class CtxWf:
    ctx: Context


@dataclass(frozen=True)
class KindWf:
    ctx: Context
    kind: Kind


@dataclass(frozen=True)
class Kinding:
    ctx: Context
    ty: Type
    kind: Kind


@dataclass(frozen=True)
class Typing:
    ctx: Context
    term: Term
    ty: Type


@dataclass(frozen=True)
class Subkind:
    ctx: Context
    lo: Kind
    hi: Kind


@dataclass(frozen=True)
class Subtype:
    ctx: Context
    lo: Type
    hi: Type
    kind: Kind


@dataclass(frozen=True)
class KindEq:
    ctx: Context
    left: Kind
    right: Kind


@dataclass(frozen=True)
class TypeEq:
    ctx: Context
    left: Type
    right: Type
    kind: Kind


# ---------------------------------------------------------------- canonical


@dataclass(frozen=True)
class CCtxWf:
    ctx: Context


@dataclass(frozen=True)
class CKindWf:
    ctx: Context
    kind: Kind


@dataclass(frozen=True)
class CVarKind:
    ctx: Context
    var: int
    kind: Kind


@dataclass(frozen=True)
class CNeKind:
    ctx: Context
    ty: Type
    kind: Kind


@dataclass(frozen=True)
class CKindSynth:
    ctx: Context
    ty: Type
    kind: Kind


@dataclass(frozen=True)
class CKindCheck:
    ctx: Context
    ty: Type
    kind: Kind


@dataclass(frozen=True)
class CSpineKind:
    ctx: Context
    kind: Kind
    spine: tuple
    result: Kind


@dataclass(frozen=True)
class CSubProper:
    ctx: Context
    lo: Type
    hi: Type


@dataclass(frozen=True)
class CSubCheck:
    ctx: Context
    lo: Type
    hi: Type
    kind: Kind


@dataclass(frozen=True)
class CSubkind:
    ctx: Context
    lo: Kind
    hi: Kind


@dataclass(frozen=True)
class CKindEq:
    ctx: Context
    left: Kind
    right: Kind


@dataclass(frozen=True)
class CTypeEq:
    ctx: Context
    left: Type
    right: Type
    kind: Kind


@dataclass(frozen=True)
class CSpineEq:
    ctx: Context
    kind: Kind
    left: tuple
    right: tuple
    result: Kind


@dataclass(frozen=True)
class TfSub:
    """Transitivity-free subtyping of closed proper normal types."""

    lo: Type
    hi: Type


DECLARATIVE = (CtxWf, KindWf, Kinding, Typing, Subkind, Subtype, KindEq, TypeEq)
CANONICAL = (CCtxWf, CKindWf, CVarKind, CNeKind, CKindSynth, CKindCheck, CSpineKind,
             CSubProper, CSubCheck, CSubkind, CKindEq, CTypeEq, CSpineEq)

Judgment = Union[
    CtxWf, KindWf, Kinding, Typing, Subkind, Subtype, KindEq, TypeEq,
    CCtxWf, CKindWf, CVarKind, CNeKind, CKindSynth, CKindCheck, CSpineKind,
    CSubProper, CSubCheck, CSubkind, CKindEq, CTypeEq, CSpineEq, TfSub,
]


@dataclass(frozen=True, eq=False)
class Derivation:
    """A rule application. Every node stores its full conclusion.

    Equality is identity: derivations are shared freely and compared by
    conclusion where it matters.
    """

    rule: str
    conclusion: Judgment
    premises: tuple = ()
    side: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.premises, tuple):
            object.__setattr__(self, "premises", tuple(self.premises))

    def size(self) -> int:
        seen: set[int] = set()
        stack = [self]
        n = 0
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            n += 1
            stack.extend(d.premises)
        return n

    def depth(self) -> int:
        memo: dict[int, int] = {}

        def go(d: "Derivation") -> int:
            if id(d) not in memo:
                memo[id(d)] = 1 + max((go(p) for p in d.premises), default=0)
            return memo[id(d)]

        return go(self)

    def rules_used(self) -> set[str]:
        out: set[str] = set()
        seen: set[int] = set()
        stack = [self]
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            out.add(d.rule)
            stack.extend(d.premises)
        return out


class PreconditionError(ValueError):
    """An admissible-rule constructor was given premises of the wrong shape."""
