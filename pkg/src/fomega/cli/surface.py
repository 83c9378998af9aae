"""Surface syntax: grammar, name resolution and declaration files.

Precedence: application binds tighter than ``->`` (right associative), which
binds tighter than ``..``. Binders extend as far right as possible. ``*`` is
``Bot .. Top`` and a non-dependent kind arrow gets an unused binder. The
bounded binders ``all X <= A : K. B``, ``lam X <= A : K. B``,
``tfun X <= A : K. t`` and ``(X <= A : K) -> J`` expand to intervals from the
bottom of ``K`` to ``A``.

A declaration file is a sequence of items, each scoped over the earlier ones::

    postulate NAME : KIND          -- a type variable binding
    type NAME : KIND               -- same as a postulate
    type NAME : KIND = TYPE        -- a transparent definition
    def name : TYPE = TERM         -- a term definition

Definitions are expanded where they are used, so resolved syntax mentions
only postulates and local binders. Comments run from ``--`` or ``#`` to the
end of the line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .. import sugar
from ..syntax import (
    BOT, TOP, All, App, Arr, DArr, Intv, Lam, TmAbs, TmApp, TmTAbs, TmTApp, TmVar, TpBind, TpVar,
    shift_term, shift_type,
)

GRAMMAR = r"""
start: decl*

decl: "postulate" NAME ":" kind ";"?             -> postulate
    | "type" NAME ":" kind ("=" ty)? ";"?        -> typedef
    | "def" NAME ":" ty "=" term ";"?            -> termdef

?kind: katom "->" kind                           -> karrow
     | "(" NAME ":" kind ")" "->" kind           -> kdep
     | "(" NAME "<=" ty ":" kind ")" "->" kind   -> kdepbnd
     | ty ".." ty                                -> kintv
     | katom
?katom: "*"                                      -> kstar
      | "(" kind ")"

?ty: binder
   | appty "->" ty                               -> arrow
   | appty binder                                -> app
   | appty
binder: "all" NAME ":" kind "." ty               -> all
      | "all" NAME "<=" ty ":" kind "." ty       -> allbnd
      | "lam" NAME ":" kind "." ty               -> lam
      | "lam" NAME "<=" ty ":" kind "." ty       -> lambnd
?appty: appty atomty                             -> app
      | atomty
?atomty: "Top"                                   -> top
       | "Bot"                                   -> bot
       | NAME                                    -> var
       | "(" ty ")"

?term: tbinder
     | appterm tbinder                           -> tmapp
     | appterm
tbinder: "fun" NAME ":" ty "." term              -> fun
       | "tfun" NAME ":" kind "." term           -> tfun
       | "tfun" NAME "<=" ty ":" kind "." term   -> tfunbnd
?appterm: appterm atomterm                       -> tmapp
        | appterm "[" ty "]"                     -> tyapp
        | atomterm
?atomterm: NAME                                  -> tmvar
         | "(" term ")"

NAME: /(?!(all|lam|fun|tfun|Top|Bot|type|def|postulate)\b)[A-Za-z_][A-Za-z0-9_']*/

COMMENT: /(--|#)[^\n]*/
%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSERS: dict = {}


def _parser(start: str) -> Lark:
    p = _PARSERS.get(start)
    if p is None:
        p = Lark(GRAMMAR, start=start, parser="lalr", propagate_positions=True)
        _PARSERS[start] = p
    return p


class ParseError(Exception):
    """A syntax or scoping error at a source location."""

    def __init__(self, line: int, col: int, expected: str, message: str = "") -> None:
        self.line, self.col, self.expected = line, col, expected
        self.message = message or f"expected {expected}"
        super().__init__(f"{line}:{col}: {self.message}")


def _syntax_error(e: UnexpectedInput) -> ParseError:
    line, col = getattr(e, "line", 0) or 0, getattr(e, "column", 0) or 0
    if isinstance(e, UnexpectedToken):
        exp = sorted(e.accepts or e.expected)
        got = "end of input" if e.token.type == "$END" else repr(str(e.token))
        return ParseError(line, col, ", ".join(exp), f"unexpected {got}; expected one of {', '.join(exp)}")
    if isinstance(e, UnexpectedCharacters):
        exp = sorted(e.allowed or ())
        return ParseError(line, col, ", ".join(exp), f"unexpected character {e.char!r}")
    if isinstance(e, UnexpectedEOF):
        exp = sorted(e.expected)
        return ParseError(line, col, ", ".join(exp), "unexpected end of input")
    return ParseError(line, col, "valid syntax", str(e))


def parse_tree(text: str, start: str = "start") -> Tree:
    try:
        return _parser(start).parse(text)
    except UnexpectedInput as e:
        raise _syntax_error(e) from None


# ---------------------------------------------------------------- scopes


@dataclass(frozen=True)
class _Entry:
    name: str
    sort: str                # "type", "term", "typedef" or "termdef"
    value: object = None     # the expansion of a definition
    types_at: int = 0        # type bindings in scope where the definition was made


@dataclass(frozen=True)
class Scope:
    entries: tuple = ()

    def push(self, name: str, sort: str, value=None) -> "Scope":
        return Scope(self.entries + (_Entry(name, sort, value, self.type_depth()),))

    def type_depth(self) -> int:
        return sum(1 for e in self.entries if e.sort == "type")

    def term_depth(self) -> int:
        return sum(1 for e in self.entries if e.sort == "term")

    def names(self) -> set:
        return {e.name for e in self.entries}

    def find(self, name: str):
        """(entry, number of type bindings after it, number of term bindings after it)."""
        types = terms = 0
        for e in reversed(self.entries):
            if e.name == name:
                return e, types, terms
            if e.sort == "type":
                types += 1
            elif e.sort == "term":
                terms += 1
        return None


def _loc(node) -> tuple[int, int]:
    if isinstance(node, Token):
        return node.line or 0, node.column or 0
    meta = getattr(node, "meta", None)
    if meta is not None and not meta.empty:
        return meta.line, meta.column
    return 0, 0


class Resolver:
    """Turns parse trees into de Bruijn syntax under a scope."""

    def kind(self, t, sc: Scope):
        match t.data:
            case "kstar":
                return sugar.star()
            case "kintv":
                return Intv(self.ty(t.children[0], sc), self.ty(t.children[1], sc))
            case "karrow":
                dom = self.kind(t.children[0], sc)
                cod = self.kind(t.children[1], sc.push("_", "type"))
                return DArr(dom, cod)
            case "kdep":
                name, dom_t, cod_t = t.children
                dom = self.kind(dom_t, sc)
                return DArr(dom, self.kind(cod_t, sc.push(str(name), "type")))
            case "kdepbnd":
                name, up_t, dom_t, cod_t = t.children
                up, dom = self.ty(up_t, sc), self.kind(dom_t, sc)
                return sugar.bounded_darr(up, dom, self.kind(cod_t, sc.push(str(name), "type")))
        raise self._error(t, "a kind")

    def ty(self, t, sc: Scope):
        if isinstance(t, Token):
            raise self._error(t, "a type")
        match t.data:
            case "top":
                return TOP
            case "bot":
                return BOT
            case "var":
                return self.type_var(t.children[0], sc)
            case "arrow":
                return Arr(self.ty(t.children[0], sc), self.ty(t.children[1], sc))
            case "app":
                return App(self.ty(t.children[0], sc), self.ty(t.children[1], sc))
            case "binder":
                return self.ty(t.children[0], sc)
            case "all" | "lam":
                name, k_t, body_t = t.children
                k = self.kind(k_t, sc)
                body = self.ty(body_t, sc.push(str(name), "type"))
                return All(k, body) if t.data == "all" else Lam(k, body)
            case "allbnd" | "lambnd":
                name, up_t, k_t, body_t = t.children
                up, k = self.ty(up_t, sc), self.kind(k_t, sc)
                body = self.ty(body_t, sc.push(str(name), "type"))
                make = sugar.bounded_all if t.data == "allbnd" else sugar.bounded_lam
                return make(up, k, body)
        raise self._error(t, "a type")

    def type_var(self, tok: Token, sc: Scope):
        hit = sc.find(str(tok))
        if hit is None:
            line, col = _loc(tok)
            raise ParseError(line, col, "a bound type name", f"unbound identifier {str(tok)!r}")
        entry, types_after, _ = hit
        if entry.sort == "type":
            return TpVar(types_after)
        if entry.sort == "typedef":
            return shift_type(entry.value, sc.type_depth() - entry.types_at)
        line, col = _loc(tok)
        raise ParseError(line, col, "a type name", f"{str(tok)!r} names a term, not a type")

    def term(self, t, sc: Scope):
        match t.data:
            case "tmvar":
                return self.term_var(t.children[0], sc)
            case "tmapp":
                return TmApp(self.term(t.children[0], sc), self.term(t.children[1], sc))
            case "tyapp":
                return TmTApp(self.term(t.children[0], sc), self.ty(t.children[1], sc))
            case "tbinder":
                return self.term(t.children[0], sc)
            case "fun":
                name, a_t, body_t = t.children
                return TmAbs(self.ty(a_t, sc), self.term(body_t, sc.push(str(name), "term")))
            case "tfun":
                name, k_t, body_t = t.children
                return TmTAbs(self.kind(k_t, sc), self.term(body_t, sc.push(str(name), "type")))
            case "tfunbnd":
                name, up_t, k_t, body_t = t.children
                up, k = self.ty(up_t, sc), self.kind(k_t, sc)
                return sugar.bounded_tabs(up, k, self.term(body_t, sc.push(str(name), "type")))
        raise self._error(t, "a term")

    def term_var(self, tok: Token, sc: Scope):
        hit = sc.find(str(tok))
        if hit is None:
            line, col = _loc(tok)
            raise ParseError(line, col, "a bound term name", f"unbound identifier {str(tok)!r}")
        entry, _, terms_after = hit
        if entry.sort == "term":
            return TmVar(terms_after)
        if entry.sort == "termdef":
            return shift_term(entry.value, 0, sc.type_depth() - entry.types_at)
        line, col = _loc(tok)
        raise ParseError(line, col, "a term name", f"{str(tok)!r} names a type, not a term")

    def _error(self, t, what: str) -> ParseError:
        line, col = _loc(t)
        return ParseError(line, col, what, f"expected {what}")


# ---------------------------------------------------------------- declaration files


@dataclass(frozen=True)
class Postulate:
    name: str
    kind: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TypeDef:
    name: str
    kind: object
    body: object = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TermDef:
    name: str
    ty: object
    term: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class DeclFile:
    items: tuple = ()

    def binds(self, item) -> bool:
        return isinstance(item, Postulate) or (isinstance(item, TypeDef) and item.body is None)

    def context_before(self, i: int) -> tuple:
        """The type bindings introduced by items before position ``i``."""
        return tuple(TpBind(it.kind) for it in self.items[:i] if self.binds(it))

    def context(self) -> tuple:
        return self.context_before(len(self.items))

    def names_before(self, i: int) -> list:
        return [it.name for it in self.items[:i] if self.binds(it)]

    def scope(self, upto: int | None = None) -> Scope:
        sc = Scope()
        for it in self.items[: len(self.items) if upto is None else upto]:
            sc = _declare(sc, it)
        return sc

    def find(self, name: str):
        for it in reversed(self.items):
            if it.name == name:
                return it
        return None

    def index_of(self, item) -> int:
        return next(i for i, it in enumerate(self.items) if it is item)


def _declare(sc: Scope, item) -> Scope:
    if isinstance(item, Postulate) or (isinstance(item, TypeDef) and item.body is None):
        return sc.push(item.name, "type")
    if isinstance(item, TypeDef):
        return sc.push(item.name, "typedef", item.body)
    return sc.push(item.name, "termdef", item.term)


def parse(text: str | bytes) -> DeclFile:
    """Parse and resolve a declaration file."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(1, 1, "UTF-8 text", f"input is not UTF-8: {e.reason}") from None
    tree = parse_tree(text)
    r = Resolver()
    sc = Scope()
    items: list = []
    seen: set = set()
    for d in tree.children:
        name_tok = d.children[0]
        name = str(name_tok)
        line, col = _loc(name_tok)
        if name in seen:
            raise ParseError(line, col, "a fresh name", f"{name!r} is already declared")
        seen.add(name)
        if d.data == "postulate":
            item = Postulate(name, r.kind(d.children[1], sc), line)
        elif d.data == "typedef":
            k = r.kind(d.children[1], sc)
            body = r.ty(d.children[2], sc) if len(d.children) > 2 and d.children[2] is not None else None
            item = TypeDef(name, k, body, line)
        else:
            item = TermDef(name, r.ty(d.children[1], sc), r.term(d.children[2], sc), line)
        items.append(item)
        sc = _declare(sc, item)
    return DeclFile(tuple(items))


def parse_type(text: str, scope: Scope | None = None):
    return Resolver().ty(parse_tree(text, "ty"), scope or Scope())


def parse_kind(text: str, scope: Scope | None = None):
    return Resolver().kind(parse_tree(text, "kind"), scope or Scope())


def parse_term(text: str, scope: Scope | None = None):
    return Resolver().term(parse_tree(text, "term"), scope or Scope())


def scope_of_names(entries) -> Scope:
    """A scope from (name, sort) pairs, outermost first."""
    sc = Scope()
    for name, sort in entries:
        sc = sc.push(name, sort)
    return sc


__all__ = [
    "GRAMMAR", "ParseError", "Scope", "Resolver", "Postulate", "TypeDef", "TermDef", "DeclFile",
    "parse", "parse_tree", "parse_type", "parse_kind", "parse_term", "scope_of_names",
]
