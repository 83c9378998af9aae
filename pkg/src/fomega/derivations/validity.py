"""Validity: recovering well-formedness derivations from judgments.

Kinding validity (Γ ⊢ A : K gives Γ ⊢ K kd), subtyping validity (both sides
inhabit the kind), subkinding validity and the equality variants. The β and
application cases use the substitution transformation; the application case
with unequal arguments also needs functionality.
"""

from __future__ import annotations

import weakref

from .judgments import Derivation, Kinding, PreconditionError, Subkind, Subtype
from . import rules as R
from .transform import ctx_wf_of, kind_var_wf, subst_top, weaken1

_KV: "weakref.WeakKeyDictionary[Derivation, Derivation]" = weakref.WeakKeyDictionary()
_SV: "weakref.WeakKeyDictionary[Derivation, tuple]" = weakref.WeakKeyDictionary()
_SKV: "weakref.WeakKeyDictionary[Derivation, tuple]" = weakref.WeakKeyDictionary()


def wf_star(ctx_wf: Derivation) -> Derivation:
    return R.wf_intv(R.k_bot(ctx_wf), R.k_top(ctx_wf))


def to_star(d: Derivation) -> Derivation:
    """Widen Γ ⊢ A : B..C to Γ ⊢ A : * through the singleton A..A."""
    c = R.expect(d, Kinding, "premise")
    if c.kind == R.STAR:
        return d
    return R.k_sub(R.k_sing(d), R.sk_intv(R.st_bot(d), R.st_top(d)))


def widen_star(d: Derivation) -> Derivation:
    """Widen Γ ⊢ A <= B : C..D to Γ ⊢ A <= B : *."""
    c = R.expect(d, Subtype, "premise")
    if c.kind == R.STAR:
        return d
    kd = kinding_validity(subtype_validity(d)[0])
    if kd.rule != "Wf-Intv":
        raise PreconditionError("subtyping kind is not an interval")
    return R.st_sub(d, R.sk_intv(R.st_bot(kd.premises[0]), R.st_top(kd.premises[1])))


def domain_wf(d: Derivation) -> Derivation:
    """For Γ, X:J ⊢ ..., the formation derivation of J in Γ."""
    return ctx_wf_of(d).premises[1]


def kinding_validity(d: Derivation) -> Derivation:
    R.expect(d, Kinding, "premise")
    hit = _KV.get(d)
    if hit is None:
        hit = _kinding_validity(d)
        _KV[d] = hit
    return hit


def _kinding_validity(d: Derivation) -> Derivation:
    c = d.conclusion
    p = d.premises
    match d.rule:
        case "K-Var":
            return kind_var_wf(p[0], c.ty.index)
        case "K-Top" | "K-Bot" | "K-Arr" | "K-All":
            return wf_star(ctx_wf_of(d))
        case "K-Abs":
            return R.wf_darr(p[0], p[2] if len(p) > 2 else kinding_validity(p[1]))
        case "K-App":
            if len(p) > 2:
                return p[3]
            fn_wf = kinding_validity(p[0])
            return subst_top(fn_wf.premises[1], p[1])
        case "K-Sing":
            s = to_star(p[0])
            return R.wf_intv(s, s)
        case "K-Sub":
            return subkind_validity(p[1])[1]
    raise PreconditionError(f"not a kinding rule: {d.rule}")


def subtype_validity(d: Derivation) -> tuple[Derivation, Derivation]:
    R.expect(d, Subtype, "premise")
    hit = _SV.get(d)
    if hit is None:
        hit = _subtype_validity(d)
        _SV[d] = hit
    return hit


def eta_side(d: Derivation) -> Derivation:
    """Γ ⊢ λX:J. A X : (X:J) -> K from Γ ⊢ A : (X:J) -> K."""
    dom = kinding_validity(d).premises[0]
    inner = R.c_tpbind(ctx_wf_of(d), dom)
    return R.k_abs(dom, R.k_app(weaken1(d, dom), R.k_var(inner, 0)))


def _subtype_validity(d: Derivation):
    p = d.premises
    match d.rule:
        case "ST-Refl":
            return p[0], p[0]
        case "ST-Trans":
            return subtype_validity(p[0])[0], subtype_validity(p[1])[1]
        case "ST-Top":
            return to_star(p[0]), R.k_top(ctx_wf_of(d))
        case "ST-Bot":
            return R.k_bot(ctx_wf_of(d)), to_star(p[0])
        case "ST-Beta1" | "ST-Beta2":
            redex = R.k_app(R.k_abs(domain_wf(p[0]), p[0]), p[1])
            reduct = subst_top(p[0], p[1])
            return (redex, reduct) if d.rule == "ST-Beta1" else (reduct, redex)
        case "ST-Eta1":
            return eta_side(p[0]), p[0]
        case "ST-Eta2":
            return p[0], eta_side(p[0])
        case "ST-Arr":
            dom, cod = subtype_validity(p[0]), subtype_validity(p[1])
            return R.k_arr(dom[1], cod[0]), R.k_arr(dom[0], cod[1])
        case "ST-All":
            bound = subkind_validity(p[1])[0]
            return p[0], R.k_all(bound, subtype_validity(p[2])[1])
        case "ST-Abs":
            return p[0], p[1]
        case "ST-App":
            fn = subtype_validity(p[0])
            arg = typeeq_validity(p[1])
            lo = R.k_app(fn[0], arg[0])
            hi = R.k_app(fn[1], arg[1])
            if hi.conclusion.kind != lo.conclusion.kind:
                from .admissible import funct_kind, teq_sym
                cod_wf = p[3] if len(p) > 2 else kinding_validity(fn[0]).premises[1]
                eq = funct_kind(cod_wf, teq_sym(p[1]))
                hi = R.k_sub(hi, eq.premises[0])
            return lo, hi
        case "ST-Bnd1":
            return kinding_validity(p[0]).premises[0], to_star(p[0])
        case "ST-Bnd2":
            return to_star(p[0]), kinding_validity(p[0]).premises[1]
        case "ST-Intv":
            lo0, hi0 = subtype_validity(p[0])
            wide = widen_star(p[0])
            lo = R.k_sub(R.k_sing(lo0), R.sk_intv(R.st_refl(to_star(lo0)), wide))
            hi = R.k_sub(R.k_sing(hi0), R.sk_intv(wide, R.st_refl(to_star(hi0))))
            return lo, hi
        case "ST-Sub":
            lo, hi = subtype_validity(p[0])
            return R.k_sub(lo, p[1]), R.k_sub(hi, p[1])
    raise PreconditionError(f"not a subtyping rule: {d.rule}")


def subkind_validity(d: Derivation) -> tuple[Derivation, Derivation]:
    R.expect(d, Subkind, "premise")
    hit = _SKV.get(d)
    if hit is None:
        hit = _subkind_validity(d)
        _SKV[d] = hit
    return hit


def _subkind_validity(d: Derivation):
    p = d.premises
    match d.rule:
        case "SK-Intv":
            lower, upper = subtype_validity(p[0]), subtype_validity(p[1])
            return R.wf_intv(lower[1], upper[0]), R.wf_intv(lower[0], upper[1])
        case "SK-DArr":
            return p[0], R.wf_darr(subkind_validity(p[1])[0], subkind_validity(p[2])[1])
    raise PreconditionError(f"not a subkinding rule: {d.rule}")


def typeeq_validity(d: Derivation) -> tuple[Derivation, Derivation]:
    if d.rule != "ST-AntiSym":
        raise PreconditionError("type equations are built with ST-AntiSym")
    return subtype_validity(d.premises[0])


def kindeq_validity(d: Derivation) -> tuple[Derivation, Derivation]:
    if d.rule != "SK-AntiSym":
        raise PreconditionError("kind equations are built with SK-AntiSym")
    return subkind_validity(d.premises[0])


def _gray(d: Derivation) -> tuple:
    p = d.premises
    match d.rule:
        case "K-Abs":
            return (kinding_validity(p[1]),)
        case "K-App":
            return kinding_validity(p[0]).premises[1], kinding_validity(d)
        case "ST-Beta1" | "ST-Beta2":
            body_wf = kinding_validity(p[0])
            return subst_top(p[0], p[1]), body_wf, subst_top(body_wf, p[1])
        case "ST-App":
            fn_lo = subtype_validity(p[0])[0]
            return typeeq_validity(p[1])[0], kinding_validity(fn_lo).premises[1], \
                kinding_validity(R.k_app(fn_lo, typeeq_validity(p[1])[0]))
    return ()


_GRAY_RULES = {"K-Abs": 2, "K-App": 2, "ST-Beta1": 2, "ST-Beta2": 2, "ST-App": 2}


def add_validity_conditions(d: Derivation) -> Derivation:
    """The same tree with every gray premise supplied, as Extended mode expects."""
    memo: dict[int, Derivation] = {}
    keep: list[Derivation] = []

    def go(n: Derivation) -> Derivation:
        if id(n) in memo:
            return memo[id(n)]
        required = _GRAY_RULES.get(n.rule)
        if required is None:
            prem = tuple(go(q) for q in n.premises)
        else:
            core = Derivation(n.rule, n.conclusion, n.premises[:required], n.side)
            keep.append(core)
            prem = tuple(go(q) for q in core.premises + _gray(core))
        out = Derivation(n.rule, n.conclusion, prem, n.side)
        memo[id(n)] = out
        keep.append(n)
        return out

    return go(d)


__all__ = [
    "add_validity_conditions",
    "wf_star", "to_star", "widen_star", "domain_wf", "eta_side", "kinding_validity",
    "subtype_validity", "subkind_validity", "typeeq_validity", "kindeq_validity",
]
