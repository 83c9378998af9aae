"""Abstract syntax: terms, types, kinds, shapes, spines and contexts.

Variables are de Bruijn indices. Term and type variables live in one mixed
context, but each sort counts only the bindings of its own sort, so a term
binder never shifts the type variables below it (and vice versa).

Substitution convention: ``subst_type(e, j, payload)`` replaces type variable
``j`` by ``payload`` and decrements the variables above ``j``. The payload is
scoped in the *result* context, i.e. the context of ``e`` with the ``j``-th
type binding removed. For the common ``j == 0`` case this is simply the
context outside the binder.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


# ---------------------------------------------------------------- types


@dataclass(frozen=True, slots=True)
class TpVar:
    index: int


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class Arr:
    dom: "Type"
    cod: "Type"


@dataclass(frozen=True, slots=True)
class All:
    kind: "Kind"
    body: "Type"


@dataclass(frozen=True, slots=True)
class Lam:
    kind: "Kind"
    body: "Type"


@dataclass(frozen=True, slots=True)
class App:
    fn: "Type"
    arg: "Type"


Type = Union[TpVar, Top, Bot, Arr, All, Lam, App]
TYPE_CLASSES = (TpVar, Top, Bot, Arr, All, Lam, App)

TOP = Top()
BOT = Bot()


# ---------------------------------------------------------------- kinds


@dataclass(frozen=True, slots=True)
class Intv:
    lo: Type
    hi: Type


@dataclass(frozen=True, slots=True)
class DArr:
    """Dependent arrow kind; ``cod`` binds one type variable."""

    dom: "Kind"
    cod: "Kind"


Kind = Union[Intv, DArr]
KIND_CLASSES = (Intv, DArr)


# ---------------------------------------------------------------- shapes


@dataclass(frozen=True, slots=True)
class Star:
    pass


@dataclass(frozen=True, slots=True)
class SArr:
    dom: "Shape"
    cod: "Shape"


Shape = Union[Star, SArr]
STAR = Star()


# ---------------------------------------------------------------- terms


@dataclass(frozen=True, slots=True)
class TmVar:
    index: int


@dataclass(frozen=True, slots=True)
class TmAbs:
    ty: Type
    body: "Term"


@dataclass(frozen=True, slots=True)
class TmApp:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class TmTAbs:
    kind: Kind
    body: "Term"


@dataclass(frozen=True, slots=True)
class TmTApp:
    fn: "Term"
    ty: Type


Term = Union[TmVar, TmAbs, TmApp, TmTAbs, TmTApp]
TERM_CLASSES = (TmVar, TmAbs, TmApp, TmTAbs, TmTApp)


# ---------------------------------------------------------------- contexts


@dataclass(frozen=True, slots=True)
class TmBind:
    ty: Type


@dataclass(frozen=True, slots=True)
class TpBind:
    kind: Kind


Binding = Union[TmBind, TpBind]
Context = tuple  # tuple[Binding, ...], innermost binding last

EMPTY: Context = ()


def extend(ctx: Context, binding: Binding) -> Context:
    return ctx + (binding,)


def type_depth(ctx: Context) -> int:
    return sum(1 for b in ctx if isinstance(b, TpBind))


def term_depth(ctx: Context) -> int:
    return sum(1 for b in ctx if isinstance(b, TmBind))


def _locate(ctx: Context, index: int, sort: type) -> tuple[int, int] | None:
    """Return (position in ctx, number of type bindings after it)."""
    seen = 0
    types_after = 0
    for pos in range(len(ctx) - 1, -1, -1):
        b = ctx[pos]
        if isinstance(b, sort):
            if seen == index:
                return pos, types_after
            seen += 1
        if isinstance(b, TpBind):
            types_after += 1
    return None


def lookup_kind(ctx: Context, index: int) -> Kind | None:
    """Kind of type variable ``index``, shifted into the scope of ``ctx``."""
    hit = _locate(ctx, index, TpBind)
    if hit is None:
        return None
    pos, after = hit
    return shift_kind(ctx[pos].kind, after + 1)


def lookup_type(ctx: Context, index: int) -> Type | None:
    """Type of term variable ``index``, shifted into the scope of ``ctx``."""
    hit = _locate(ctx, index, TmBind)
    if hit is None:
        return None
    pos, after = hit
    return shift_type(ctx[pos].ty, after)


def type_position(ctx: Context, index: int) -> int | None:
    hit = _locate(ctx, index, TpBind)
    return None if hit is None else hit[0]


# ---------------------------------------------------------------- shifting


def shift_type(a: Type, by: int, cutoff: int = 0) -> Type:
    if by == 0:
        return a
    match a:
        case TpVar(i):
            return TpVar(i + by) if i >= cutoff else a
        case Top() | Bot():
            return a
        case Arr(d, c):
            return Arr(shift_type(d, by, cutoff), shift_type(c, by, cutoff))
        case All(k, b):
            return All(shift_kind(k, by, cutoff), shift_type(b, by, cutoff + 1))
        case Lam(k, b):
            return Lam(shift_kind(k, by, cutoff), shift_type(b, by, cutoff + 1))
        case App(f, x):
            return App(shift_type(f, by, cutoff), shift_type(x, by, cutoff))
    raise TypeError(f"not a type: {a!r}")


def shift_kind(k: Kind, by: int, cutoff: int = 0) -> Kind:
    if by == 0:
        return k
    match k:
        case Intv(lo, hi):
            return Intv(shift_type(lo, by, cutoff), shift_type(hi, by, cutoff))
        case DArr(j, c):
            return DArr(shift_kind(j, by, cutoff), shift_kind(c, by, cutoff + 1))
    raise TypeError(f"not a kind: {k!r}")


def shift_term(t: Term, by_terms: int = 0, by_types: int = 0,
               term_cutoff: int = 0, type_cutoff: int = 0) -> Term:
    """Shift free term variables by ``by_terms`` and type variables by ``by_types``."""
    if by_terms == 0 and by_types == 0:
        return t
    match t:
        case TmVar(i):
            return TmVar(i + by_terms) if i >= term_cutoff else t
        case TmAbs(a, b):
            return TmAbs(shift_type(a, by_types, type_cutoff),
                         shift_term(b, by_terms, by_types, term_cutoff + 1, type_cutoff))
        case TmApp(f, x):
            return TmApp(shift_term(f, by_terms, by_types, term_cutoff, type_cutoff),
                         shift_term(x, by_terms, by_types, term_cutoff, type_cutoff))
        case TmTAbs(k, b):
            return TmTAbs(shift_kind(k, by_types, type_cutoff),
                          shift_term(b, by_terms, by_types, term_cutoff, type_cutoff + 1))
        case TmTApp(f, a):
            return TmTApp(shift_term(f, by_terms, by_types, term_cutoff, type_cutoff),
                          shift_type(a, by_types, type_cutoff))
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------- substitution


def subst_type(a: Type, j: int, payload: Type) -> Type:
    match a:
        case TpVar(i):
            if i == j:
                return payload
            return TpVar(i - 1) if i > j else a
        case Top() | Bot():
            return a
        case Arr(d, c):
            return Arr(subst_type(d, j, payload), subst_type(c, j, payload))
        case All(k, b):
            return All(subst_kind(k, j, payload), subst_type(b, j + 1, shift_type(payload, 1)))
        case Lam(k, b):
            return Lam(subst_kind(k, j, payload), subst_type(b, j + 1, shift_type(payload, 1)))
        case App(f, x):
            return App(subst_type(f, j, payload), subst_type(x, j, payload))
    raise TypeError(f"not a type: {a!r}")


def subst_kind(k: Kind, j: int, payload: Type) -> Kind:
    match k:
        case Intv(lo, hi):
            return Intv(subst_type(lo, j, payload), subst_type(hi, j, payload))
        case DArr(d, c):
            return DArr(subst_kind(d, j, payload), subst_kind(c, j + 1, shift_type(payload, 1)))
    raise TypeError(f"not a kind: {k!r}")


def subst_type_in_term(t: Term, j: int, payload: Type) -> Term:
    match t:
        case TmVar():
            return t
        case TmAbs(a, b):
            return TmAbs(subst_type(a, j, payload), subst_type_in_term(b, j, payload))
        case TmApp(f, x):
            return TmApp(subst_type_in_term(f, j, payload), subst_type_in_term(x, j, payload))
        case TmTAbs(k, b):
            return TmTAbs(subst_kind(k, j, payload),
                          subst_type_in_term(b, j + 1, shift_type(payload, 1)))
        case TmTApp(f, a):
            return TmTApp(subst_type_in_term(f, j, payload), subst_type(a, j, payload))
    raise TypeError(f"not a term: {t!r}")


def subst_term(t: Term, j: int, payload: Term) -> Term:
    match t:
        case TmVar(i):
            if i == j:
                return payload
            return TmVar(i - 1) if i > j else t
        case TmAbs(a, b):
            return TmAbs(a, subst_term(b, j + 1, shift_term(payload, by_terms=1)))
        case TmApp(f, x):
            return TmApp(subst_term(f, j, payload), subst_term(x, j, payload))
        case TmTAbs(k, b):
            return TmTAbs(k, subst_term(b, j, shift_term(payload, by_types=1)))
        case TmTApp(f, a):
            return TmTApp(subst_term(f, j, payload), a)
    raise TypeError(f"not a term: {t!r}")


def subst(e, target: int, payload):
    """Capture-avoiding substitution of ``payload`` for variable ``target`` in ``e``.

    The sort of the variable is the sort of the payload.
    """
    if isinstance(payload, TERM_CLASSES):
        if not isinstance(e, TERM_CLASSES):
            raise TypeError("term payload can only be substituted into a term")
        return subst_term(e, target, payload)
    if isinstance(e, TYPE_CLASSES):
        return subst_type(e, target, payload)
    if isinstance(e, KIND_CLASSES):
        return subst_kind(e, target, payload)
    if isinstance(e, TERM_CLASSES):
        return subst_type_in_term(e, target, payload)
    raise TypeError(f"cannot substitute into {e!r}")


# ---------------------------------------------------------------- free variables


def type_fv(a: Type, cutoff: int = 0) -> frozenset[int]:
    """Free type variables of ``a`` (indices relative to the outside of ``a``)."""
    out: set[int] = set()
    _fv_type(a, cutoff, out)
    return frozenset(out)


def kind_fv(k: Kind, cutoff: int = 0) -> frozenset[int]:
    out: set[int] = set()
    _fv_kind(k, cutoff, out)
    return frozenset(out)


def _fv_type(a: Type, depth: int, out: set[int]) -> None:
    match a:
        case TpVar(i):
            if i >= depth:
                out.add(i - depth)
        case Top() | Bot():
            pass
        case Arr(d, c) | App(d, c):
            _fv_type(d, depth, out)
            _fv_type(c, depth, out)
        case All(k, b) | Lam(k, b):
            _fv_kind(k, depth, out)
            _fv_type(b, depth + 1, out)


def _fv_kind(k: Kind, depth: int, out: set[int]) -> None:
    match k:
        case Intv(lo, hi):
            _fv_type(lo, depth, out)
            _fv_type(hi, depth, out)
        case DArr(d, c):
            _fv_kind(d, depth, out)
            _fv_kind(c, depth + 1, out)


def occurs_type(a: Type, j: int) -> bool:
    return j in type_fv(a)


# ---------------------------------------------------------------- shapes


def erase_kind(k: Kind) -> Shape:
    match k:
        case Intv():
            return STAR
        case DArr(j, c):
            return SArr(erase_kind(j), erase_kind(c))
    raise TypeError(f"not a kind: {k!r}")


# ---------------------------------------------------------------- spines


@dataclass(frozen=True, slots=True)
class Elim:
    """Head-plus-spine view of a type. ``head`` is never an ``App``."""

    head: Type
    spine: tuple = ()

    def __post_init__(self) -> None:
        if isinstance(self.head, App):
            raise ValueError("an elimination head cannot be an application")

    def append(self, arg: Type) -> "Elim":
        return Elim(self.head, self.spine + (arg,))


def to_spine(a: Type) -> Elim:
    args: list[Type] = []
    while isinstance(a, App):
        args.append(a.arg)
        a = a.fn
    args.reverse()
    return Elim(a, tuple(args))


def from_spine(e: Elim) -> Type:
    return apply_spine(e.head, e.spine)


def apply_spine(head: Type, spine) -> Type:
    out = head
    for arg in spine:
        out = App(out, arg)
    return out


def is_neutral(a: Type) -> bool:
    """A variable applied to a (possibly empty) spine."""
    return isinstance(to_spine(a).head, TpVar)


# ---------------------------------------------------------------- equalities


def alpha_eq(a, b) -> bool:
    """α-equality. With de Bruijn indices it is plain structural equality."""
    return a == b


def weak_eq(a, b) -> bool:
    """Equality up to the shapes of operator-abstraction domain annotations.

    Works on types, kinds, spines (tuples) and ``Elim`` values.
    """
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(weak_eq(x, y) for x, y in zip(a, b))
    if isinstance(a, Elim) and isinstance(b, Elim):
        return weak_eq(a.head, b.head) and weak_eq(a.spine, b.spine)
    match a, b:
        case TpVar(i), TpVar(j):
            return i == j
        case Top(), Top():
            return True
        case Bot(), Bot():
            return True
        case (Arr(d1, c1), Arr(d2, c2)) | (App(d1, c1), App(d2, c2)):
            return weak_eq(d1, d2) and weak_eq(c1, c2)
        case All(k1, b1), All(k2, b2):
            return weak_eq(k1, k2) and weak_eq(b1, b2)
        case Lam(k1, b1), Lam(k2, b2):
            return erase_kind(k1) == erase_kind(k2) and weak_eq(b1, b2)
        case Intv(l1, h1), Intv(l2, h2):
            return weak_eq(l1, l2) and weak_eq(h1, h2)
        case DArr(j1, c1), DArr(j2, c2):
            return weak_eq(j1, j2) and weak_eq(c1, c2)
    return False


# ---------------------------------------------------------------- sizes


def type_size(a: Type) -> int:
    match a:
        case TpVar() | Top() | Bot():
            return 1
        case Arr(d, c) | App(d, c):
            return 1 + type_size(d) + type_size(c)
        case All(k, b) | Lam(k, b):
            return 1 + kind_size(k) + type_size(b)
    raise TypeError(f"not a type: {a!r}")


def kind_size(k: Kind) -> int:
    match k:
        case Intv(lo, hi):
            return 1 + type_size(lo) + type_size(hi)
        case DArr(j, c):
            return 1 + kind_size(j) + kind_size(c)
    raise TypeError(f"not a kind: {k!r}")


def term_size(t: Term) -> int:
    match t:
        case TmVar():
            return 1
        case TmAbs(a, b):
            return 1 + type_size(a) + term_size(b)
        case TmApp(f, x):
            return 1 + term_size(f) + term_size(x)
        case TmTAbs(k, b):
            return 1 + kind_size(k) + term_size(b)
        case TmTApp(f, a):
            return 1 + term_size(f) + type_size(a)
    raise TypeError(f"not a term: {t!r}")


def kind_depth(k: Kind) -> int:
    """Nesting depth of arrow kinds (intervals have depth 0)."""
    match k:
        case Intv():
            return 0
        case DArr(j, c):
            return 1 + max(kind_depth(j), kind_depth(c))
    raise TypeError(f"not a kind: {k!r}")
