"""Structural transformations of declarative derivations.

Weakening, substitution and narrowing each rewrite every node of a tree.
Nodes deeper in the tree may live in longer contexts than the root, so the
index adjustments are computed per node from the node's own context. The
context-formation chains are rebuilt at the point where the affected binding
enters.
"""

from __future__ import annotations

import dataclasses

from ..syntax import (
    KIND_CLASSES, TERM_CLASSES, TYPE_CLASSES, TmBind, TpBind, TpVar, TmVar, shift_kind,
    shift_term, shift_type, subst_kind, subst_type, subst_type_in_term, term_depth, type_depth,
)
from .judgments import CtxWf, Derivation, KindWf, Kinding, PreconditionError, Subkind, Subtype
from . import rules as R


def ctx_of(j) -> tuple:
    return getattr(j, "ctx", ())


def map_fields(j, on_type, on_kind, on_term, new_ctx):
    changes = {}
    for f in dataclasses.fields(j):
        v = getattr(j, f.name)
        if f.name == "ctx":
            changes["ctx"] = new_ctx
        elif isinstance(v, TYPE_CLASSES):
            changes[f.name] = on_type(v)
        elif isinstance(v, KIND_CLASSES):
            changes[f.name] = on_kind(v)
        elif isinstance(v, TERM_CLASSES):
            changes[f.name] = on_term(v)
        elif isinstance(v, tuple):
            changes[f.name] = tuple(on_type(x) for x in v)
    return dataclasses.replace(j, **changes)


def _binding_map(b, on_type, on_kind):
    return TpBind(on_kind(b.kind)) if isinstance(b, TpBind) else TmBind(on_type(b.ty))


# ---------------------------------------------------------------- context validity


def ctx_wf_of(d: Derivation, ctx: tuple | None = None) -> Derivation:
    """Find a context-formation derivation for ``ctx`` (default: ``d``'s own) inside ``d``."""
    target = ctx_of(d.conclusion) if ctx is None else ctx
    seen: set[int] = set()
    stack = [d]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        c = n.conclusion
        if isinstance(c, CtxWf) and c.ctx == target:
            return n
        if len(ctx_of(c)) >= len(target):
            stack.extend(reversed(n.premises))
    raise PreconditionError("no context-formation derivation found")


def peel(ctx_wf: Derivation) -> list:
    """The binding premises of a context chain, outermost first.

    Each entry is the kind-formation or proper-kinding derivation of one binding.
    """
    out = []
    n = ctx_wf
    while n.rule != "C-Empty":
        if n.rule not in ("C-TpBind", "C-TmBind"):
            raise PreconditionError(f"not a context chain node: {n.rule}")
        out.append(n.premises[1])
        n = n.premises[0]
    out.reverse()
    return out


def prefix_wf(ctx_wf: Derivation, length: int) -> Derivation:
    n = ctx_wf
    while len(n.conclusion.ctx) > length:
        n = n.premises[0]
    return n


def binding_wf(ctx_wf: Derivation, pos: int) -> Derivation:
    """The formation derivation of binding ``pos`` (counted from the left)."""
    return prefix_wf(ctx_wf, pos + 1).premises[1]


def extend_wf(ctx_wf: Derivation, wf: Derivation) -> Derivation:
    if isinstance(wf.conclusion, KindWf):
        return R.c_tpbind(ctx_wf, wf)
    return R.c_tmbind(ctx_wf, wf)


def build_ctx_wf(base: Derivation, wfs) -> Derivation:
    out = base
    for w in wfs:
        out = extend_wf(out, w)
    return out


def kind_var_wf(ctx_wf: Derivation, index: int) -> Derivation:
    """Formation derivation of the kind of type variable ``index``, in the full context."""
    ctx = ctx_wf.conclusion.ctx
    depth = 0
    for pos in range(len(ctx) - 1, -1, -1):
        if isinstance(ctx[pos], TpBind):
            if depth == index:
                return weaken_to(binding_wf(ctx_wf, pos), ctx_wf)
            depth += 1
    raise PreconditionError(f"type variable {index} is not bound")


# ---------------------------------------------------------------- weakening


def weaken(d: Derivation, pos: int, wf: Derivation) -> Derivation:
    """Insert a binding at position ``pos`` of every context in ``d``.

    ``wf`` is the formation derivation of the new binding in the first ``pos``
    bindings: a ``KindWf`` for a type binding, a proper ``Kinding`` for a term binding.
    """
    wc = wf.conclusion
    if isinstance(wc, KindWf):
        new_binding, tp = TpBind(wc.kind), True
    elif isinstance(wc, Kinding):
        new_binding, tp = TmBind(wc.ty), False
    else:
        raise PreconditionError("binding premise must be a kind formation or a kinding")
    memo: dict[int, Derivation] = {}

    def fix_ctx(ctx):
        out = list(ctx[:pos]) + [new_binding]
        for i in range(pos, len(ctx)):
            c = type_depth(ctx[pos:i]) if tp else 0
            out.append(_binding_map(ctx[i], lambda a: shift_type(a, 1 if tp else 0, c),
                                    lambda k: shift_kind(k, 1 if tp else 0, c)))
        return tuple(out)

    def go(n: Derivation) -> Derivation:
        if id(n) in memo:
            return memo[id(n)]
        c = n.conclusion
        ctx = ctx_of(c)
        if len(ctx) < pos or ctx[:pos] != wc.ctx:
            raise PreconditionError("derivation does not extend the weakening prefix")
        if isinstance(c, CtxWf) and len(ctx) == pos:
            out = extend_wf(n, wf)
        else:
            tc = type_depth(ctx[pos:])
            mc = term_depth(ctx[pos:])
            by = 1 if tp else 0
            j = map_fields(
                c,
                lambda a: shift_type(a, by, tc),
                lambda k: shift_kind(k, by, tc),
                lambda t: shift_term(t, 0 if tp else 1, by, mc, tc),
                fix_ctx(ctx),
            )
            out = Derivation(n.rule, j, tuple(go(p) for p in n.premises), n.side)
        memo[id(n)] = out
        return out

    return go(d)


def weaken_to(d: Derivation, target_wf: Derivation) -> Derivation:
    """Weaken ``d`` (in Γ) into the longer context of ``target_wf`` (Γ, Δ)."""
    ctx = ctx_of(d.conclusion)
    target = target_wf.conclusion.ctx
    if target[:len(ctx)] != ctx:
        raise PreconditionError("target context does not extend the derivation's context")
    out = d
    for pos in range(len(ctx), len(target)):
        out = weaken(out, pos, binding_wf(target_wf, pos))
    return out


def weaken1(d: Derivation, wf: Derivation) -> Derivation:
    """Weaken by one binding at the end of ``d``'s context."""
    return weaken(d, len(ctx_of(d.conclusion)), wf)


# ---------------------------------------------------------------- substitution


def subst_lemma(d: Derivation, pos: int, arg: Derivation) -> Derivation:
    """Substitute for the type binding at ``pos`` using ``arg``: Γ ⊢ B : J.

    ``d`` lives in Γ, X:J, Δ; the result lives in Γ, Δ[X:=B].
    """
    a = arg.conclusion
    if not isinstance(a, Kinding):
        raise PreconditionError("substitution premise must be a kinding")
    base_ctx = a.ctx
    if len(base_ctx) != pos:
        raise PreconditionError("substitution premise is not in the prefix context")
    base_wf = ctx_wf_of(arg)
    memo: dict[int, Derivation] = {}

    def s_type(x, depth):
        return subst_type(x, depth, shift_type(a.ty, depth))

    def s_kind(k, depth):
        return subst_kind(k, depth, shift_type(a.ty, depth))

    def fix_ctx(ctx):
        out = list(base_ctx)
        for i in range(pos + 1, len(ctx)):
            dep = type_depth(ctx[pos + 1:i])
            out.append(_binding_map(ctx[i], lambda x: s_type(x, dep), lambda k: s_kind(k, dep)))
        return tuple(out)

    def go(n: Derivation) -> Derivation:
        if id(n) in memo:
            return memo[id(n)]
        c = n.conclusion
        ctx = ctx_of(c)
        if len(ctx) <= pos or ctx[:pos] != base_ctx or ctx[pos] != TpBind(a.kind):
            raise PreconditionError("derivation context does not contain the substituted binding")
        dep = type_depth(ctx[pos + 1:])
        if isinstance(c, CtxWf) and len(ctx) == pos + 1:
            out = base_wf
        elif n.rule == "K-Var" and c.ty == TpVar(dep):
            out = weaken_to(arg, go(n.premises[0]))
        else:
            j = map_fields(
                c,
                lambda x: s_type(x, dep),
                lambda k: s_kind(k, dep),
                lambda t: subst_type_in_term(t, dep, shift_type(a.ty, dep)),
                fix_ctx(ctx),
            )
            out = Derivation(n.rule, j, tuple(go(p) for p in n.premises), n.side)
        memo[id(n)] = out
        return out

    return go(d)


def subst_top(d: Derivation, arg: Derivation) -> Derivation:
    """Substitute for the innermost binding of ``d``'s context."""
    return subst_lemma(d, len(ctx_of(d.conclusion)) - 1, arg)


# ---------------------------------------------------------------- narrowing


def narrow_context(d: Derivation, at: int, evidence: Derivation,
                   binding_wf_d: Derivation | None = None) -> Derivation:
    """Replace the binding at position ``at`` by a smaller one.

    ``evidence`` proves the new kind below the old one (``Subkind``) or the
    new type below the old one (``Subtype`` at ``*``), in the prefix context.
    ``binding_wf_d`` is the new binding's formation derivation; when omitted it
    is recovered from ``evidence`` by validity.
    """
    e = evidence.conclusion
    if isinstance(e, Subkind):
        new_binding = TpBind(e.lo)
        old_binding = TpBind(e.hi)
    elif isinstance(e, Subtype) and e.kind == R.STAR:
        new_binding = TmBind(e.lo)
        old_binding = TmBind(e.hi)
    else:
        raise PreconditionError("narrowing evidence must be a subkinding or a proper subtyping")
    if e.ctx != ctx_of(d.conclusion)[:at] or ctx_of(d.conclusion)[at] != old_binding:
        raise PreconditionError("narrowing evidence does not match the binding")
    if binding_wf_d is None:
        from .validity import subkind_validity, subtype_validity
        if isinstance(e, Subkind):
            binding_wf_d = subkind_validity(evidence)[0]
        else:
            binding_wf_d = subtype_validity(evidence)[0]
    new_wf = extend_wf(ctx_wf_of(evidence), binding_wf_d)
    tp = isinstance(new_binding, TpBind)
    memo: dict[int, Derivation] = {}

    def go(n: Derivation) -> Derivation:
        if id(n) in memo:
            return memo[id(n)]
        c = n.conclusion
        ctx = ctx_of(c)
        new_ctx = ctx[:at] + (new_binding,) + ctx[at + 1:]
        if isinstance(c, CtxWf) and len(ctx) == at + 1:
            out = new_wf
        elif tp and n.rule == "K-Var" and c.ty == TpVar(type_depth(ctx[at + 1:])):
            here = go(n.premises[0])
            out = R.k_sub(R.k_var(here, c.ty.index), weaken_to(evidence, here))
        elif not tp and n.rule == "T-Var" and c.term == TmVar(term_depth(ctx[at + 1:])):
            here = go(n.premises[0])
            out = R.t_sub(R.t_var(here, c.term.index), weaken_to(evidence, here))
        else:
            j = dataclasses.replace(c, ctx=new_ctx)
            out = Derivation(n.rule, j, tuple(go(p) for p in n.premises), n.side)
        memo[id(n)] = out
        return out

    return go(d)


def narrow_top(d: Derivation, evidence: Derivation, binding_wf_d: Derivation | None = None):
    """Narrow the innermost binding of ``d``'s context."""
    return narrow_context(d, len(ctx_of(d.conclusion)) - 1, evidence, binding_wf_d)
