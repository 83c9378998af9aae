"""Derivation files: S-expressions with a context block and shared nodes.

    (derivation
      (context G0)
      (context G1 G0 (type X "Top .. Bot"))
      (let d0 (K-Var (Kinding G1 "X" "Top .. Bot") (C-TpBind ...)))
      (root (ST-Trans (Subtype G1 "Top" "Bot" "*") (ST-Bnd1 ... d0) (ST-Bnd2 ... d0))))

A ``context`` entry names a context, optionally extending an earlier one,
with ``(type NAME "KIND")`` and ``(term NAME "TYPE")`` bindings. A node is
``(RULE JUDGMENT PREMISE ...)`` where a premise is a node or the name of a
``let``. A judgment is ``(FORM CONTEXT FIELD ...)`` with types, kinds and
terms written in surface syntax under the context's names, indices as
integers and spines as ``(spine "A" ...)``. ``TfSub`` has no context.
Comments run from ``;`` to the end of the line.
"""

from __future__ import annotations

import dataclasses

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedInput

from ..derivations import judgments as J
from ..derivations.judgments import Derivation
from ..syntax import TmBind, TpBind
from .pretty import Names, names_for_context, show_kind, show_term, show_type
from .surface import ParseError, Resolver, parse_tree, scope_of_names

_SEXP = Lark(r"""
    start: expr*
    ?expr: "(" expr* ")"   -> list
         | ESCAPED_STRING  -> string
         | SIGNED_INT      -> int
         | SYMBOL          -> symbol
    SYMBOL: /[^\s()";]+/
    COMMENT: /;[^\n]*/
    %import common.ESCAPED_STRING
    %import common.SIGNED_INT
    %import common.WS
    %ignore WS
    %ignore COMMENT
""", parser="lalr", propagate_positions=True)

FORMS = {cls.__name__: cls for cls in J.DECLARATIVE + J.CANONICAL + (J.TfSub,)}


class DrvError(Exception):
    """A malformed derivation file."""

    def __init__(self, line: int, col: int, message: str) -> None:
        self.line, self.col, self.message = line, col, message
        super().__init__(f"{line}:{col}: {message}")


# ---------------------------------------------------------------- writing


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Writer:
    def __init__(self) -> None:
        self.contexts: dict = {(): "G0"}
        self.names: dict = {(): Names()}
        self.context_lines = ["(context G0)"]

    def context(self, ctx) -> str:
        if ctx in self.contexts:
            return self.contexts[ctx]
        parent = self.context(ctx[:-1])
        names = names_for_context(ctx)
        self.names[ctx] = names
        name, _ = names.entries[-1]
        b = ctx[-1]
        pnames = self.names[ctx[:-1]]
        if isinstance(b, TpBind):
            entry = f"(type {name} {_quote(show_kind(b.kind, pnames))})"
        else:
            entry = f"(term {name} {_quote(show_type(b.ty, pnames))})"
        label = f"G{len(self.contexts)}"
        self.contexts[ctx] = label
        self.context_lines.append(f"(context {label} {parent} {entry})")
        return label

    def judgment(self, j) -> str:
        ctx = getattr(j, "ctx", ())
        label = self.context(ctx)
        names = self.names[ctx]
        parts = [type(j).__name__]
        if not isinstance(j, J.TfSub):
            parts.append(label)
        for f in dataclasses.fields(j):
            if f.name == "ctx":
                continue
            v = getattr(j, f.name)
            parts.append(self.value(f.type, v, names))
        return "(" + " ".join(parts) + ")"

    def value(self, ann: str, v, names: Names) -> str:
        if ann == "int":
            return str(v)
        if ann == "Kind":
            return _quote(show_kind(v, names))
        if ann == "Type":
            return _quote(show_type(v, names))
        if ann == "Term":
            return _quote(show_term(v, names))
        if ann == "tuple":
            return "(spine" + "".join(" " + _quote(show_type(a, names)) for a in v) + ")"
        raise TypeError(f"unsupported judgment field type {ann}")


def write_derivation(d: Derivation) -> str:
    """Serialize a derivation, hoisting nodes that are used more than once."""
    uses: dict[int, int] = {}
    order: list = []
    stack = [(d, False)]
    seen: set = set()
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        uses[id(node)] = uses.get(id(node), 0) + 1
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in reversed(node.premises):
            stack.append((p, False))

    w = _Writer()
    labels: dict[int, str] = {}
    text: dict[int, str] = {}
    lets: list[str] = []
    for node in order:  # premises before conclusions
        parts = [node.rule, w.judgment(node.conclusion)]
        parts += [labels.get(id(p)) or text[id(p)] for p in node.premises]
        s = "(" + " ".join(parts) + ")"
        if uses[id(node)] > 1 and node is not d:
            label = f"d{len(lets)}"
            labels[id(node)] = label
            lets.append(f"  (let {label} {s})")
        else:
            text[id(node)] = s
    body = ["(derivation"]
    body += ["  " + line for line in w.context_lines]
    body += lets
    body.append(f"  (root {labels.get(id(d)) or text[id(d)]}))")
    return "\n".join(body) + "\n"


# ---------------------------------------------------------------- reading


def _pos(t) -> tuple[int, int]:
    if isinstance(t, Token):
        return t.line or 0, t.column or 0
    if isinstance(t, Tree) and not t.meta.empty:
        return t.meta.line, t.meta.column
    return 0, 0


def _fail(t, message: str) -> DrvError:
    line, col = _pos(t)
    return DrvError(line, col, message)


def _symbol(t) -> str | None:
    if isinstance(t, Tree) and t.data == "symbol":
        return str(t.children[0])
    return None


def _string(t) -> str:
    if isinstance(t, Tree) and t.data == "string":
        raw = str(t.children[0])[1:-1]
        return raw.replace('\\"', '"').replace("\\\\", "\\")
    raise _fail(t, "expected a quoted string")


def _int(t) -> int:
    if isinstance(t, Tree) and t.data == "int":
        return int(t.children[0])
    raise _fail(t, "expected an integer")


def _items(t) -> list:
    if isinstance(t, Tree) and t.data == "list":
        return list(t.children)
    raise _fail(t, "expected a list")


class _Reader:
    def __init__(self) -> None:
        self.contexts: dict[str, tuple] = {}
        self.scopes: dict[str, list] = {}
        self.lets: dict[str, Derivation] = {}
        self.resolver = Resolver()

    def surface(self, t, start: str, entries):
        text = _string(t)
        line, col = _pos(t)
        try:
            tree = parse_tree(text, start)
            sc = scope_of_names(entries)
            if start == "kind":
                return self.resolver.kind(tree, sc)
            if start == "ty":
                return self.resolver.ty(tree, sc)
            return self.resolver.term(tree, sc)
        except ParseError as e:
            raise DrvError(line, col, f"in {text!r}: {e}") from None

    def context(self, items) -> None:
        if len(items) < 2 or _symbol(items[1]) is None:
            raise _fail(items[0], "context needs a name")
        label = _symbol(items[1])
        rest = items[2:]
        ctx: tuple = ()
        entries: list = []
        if rest and _symbol(rest[0]) is not None:
            parent = _symbol(rest[0])
            if parent not in self.contexts:
                raise _fail(rest[0], f"unknown context {parent}")
            ctx, entries = self.contexts[parent], list(self.scopes[parent])
            rest = rest[1:]
        for b in rest:
            parts = _items(b)
            if len(parts) != 3 or _symbol(parts[0]) not in ("type", "term") or _symbol(parts[1]) is None:
                raise _fail(b, "a binding is (type NAME \"KIND\") or (term NAME \"TYPE\")")
            sort, name = _symbol(parts[0]), _symbol(parts[1])
            if sort == "type":
                ctx += (TpBind(self.surface(parts[2], "kind", entries)),)
            else:
                ctx += (TmBind(self.surface(parts[2], "ty", entries)),)
            entries.append((name, sort))
        if label in self.contexts:
            raise _fail(items[1], f"context {label} is defined twice")
        self.contexts[label], self.scopes[label] = ctx, entries

    def judgment(self, t):
        parts = _items(t)
        form = _symbol(parts[0]) if parts else None
        cls = FORMS.get(form)
        if cls is None:
            raise _fail(t, f"unknown judgment form {form}")
        fields = [f for f in dataclasses.fields(cls) if f.name != "ctx"]
        ctx, entries, args = (), [], parts[1:]
        if cls is not J.TfSub:
            label = _symbol(args[0]) if args else None
            if label not in self.contexts:
                raise _fail(t, f"unknown context {label}")
            ctx, entries, args = self.contexts[label], self.scopes[label], args[1:]
        if len(args) != len(fields):
            raise _fail(t, f"{form} takes {len(fields)} fields after the context, got {len(args)}")
        values = [self.value(f.type, a, entries) for f, a in zip(fields, args)]
        return cls(*values) if cls is J.TfSub else cls(ctx, *values)

    def value(self, ann: str, t, entries):
        if ann == "int":
            return _int(t)
        if ann == "Kind":
            return self.surface(t, "kind", entries)
        if ann == "Type":
            return self.surface(t, "ty", entries)
        if ann == "Term":
            return self.surface(t, "term", entries)
        if ann == "tuple":
            parts = _items(t)
            if not parts or _symbol(parts[0]) != "spine":
                raise _fail(t, "expected (spine ...)")
            return tuple(self.surface(a, "ty", entries) for a in parts[1:])
        raise _fail(t, f"unsupported field type {ann}")

    def node(self, t) -> Derivation:
        name = _symbol(t)
        if name is not None:
            if name not in self.lets:
                raise _fail(t, f"unknown derivation {name}")
            return self.lets[name]
        parts = _items(t)
        if len(parts) < 2 or _symbol(parts[0]) is None:
            raise _fail(t, "a node is (RULE JUDGMENT PREMISE ...)")
        return Derivation(_symbol(parts[0]), self.judgment(parts[1]),
                          tuple(self.node(p) for p in parts[2:]))


def read_derivation(text: str | bytes) -> Derivation:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DrvError(1, 1, f"input is not UTF-8: {e.reason}") from None
    try:
        tree = _SEXP.parse(text)
    except UnexpectedInput as e:
        raise DrvError(getattr(e, "line", 0), getattr(e, "column", 0), "malformed S-expression") from None
    if len(tree.children) != 1:
        raise DrvError(1, 1, "expected a single (derivation ...) form")
    top = _items(tree.children[0])
    if not top or _symbol(top[0]) != "derivation":
        raise _fail(tree.children[0], "expected (derivation ...)")
    r = _Reader()
    root = None
    for item in top[1:]:
        parts = _items(item)
        head = _symbol(parts[0]) if parts else None
        if head == "context":
            r.context(parts)
        elif head == "let":
            if len(parts) != 3 or _symbol(parts[1]) is None:
                raise _fail(item, "expected (let NAME NODE)")
            r.lets[_symbol(parts[1])] = r.node(parts[2])
        elif head == "root":
            if len(parts) != 2 or root is not None:
                raise _fail(item, "expected exactly one (root NODE)")
            root = r.node(parts[1])
        else:
            raise _fail(item, f"unexpected {head} entry")
    if root is None:
        raise DrvError(1, 1, "no (root ...) entry")
    return root


__all__ = ["DrvError", "FORMS", "write_derivation", "read_derivation"]
