"""Random generation by running the inference rules forward.

Every generator returns a derivation together with its subject, so each
sample can be replayed through the checker. Generation is deterministic in
the seed. When a choice leads nowhere (for instance an argument of an absurd
interval kind), the attempt is dropped and a fresh one is drawn from the same
random stream.
"""

from __future__ import annotations

import random

from ..derivations import rules as R
from ..derivations import search as S
from ..derivations.judgments import Derivation, PreconditionError
from ..derivations.validity import kinding_validity, to_star, wf_star
from ..syntax import (
    TOP, DArr, Intv, lookup_kind, term_depth, type_depth, kind_depth,
)

_ATTEMPTS = 200


class _Dead(Exception):
    pass


def _need(d):
    if d is None:
        raise _Dead
    return d


class TypeGen:
    """Forward generation of kinding derivations."""

    def __init__(self, rng: random.Random, max_kind_depth: int = 3) -> None:
        self.rng = rng
        self.max_kind_depth = max_kind_depth

    # ------------------------------------------------------------ kinds

    def kind(self, cw: Derivation, size: int, depth: int | None = None) -> Derivation:
        depth = self.max_kind_depth if depth is None else depth
        r = self.rng.random()
        if depth <= 1 or size <= 1 or r < 0.55:
            if r < 0.3 or size <= 1:
                return wf_star(cw)
            lo = self.proper(cw, max(1, size // 3))
            hi = self.proper(cw, max(1, size // 3))
            if self.rng.random() < 0.5:
                lo = R.k_bot(cw) if self.rng.random() < 0.5 else lo
            else:
                hi = R.k_top(cw) if self.rng.random() < 0.5 else hi
            return R.wf_intv(lo, hi)
        dom = self.kind(cw, size // 2, depth - 1)
        cod = self.kind(R.c_tpbind(cw, dom), size // 2, depth - 1)
        return R.wf_darr(dom, cod)

    # ------------------------------------------------------------ types

    def vars_of(self, cw: Derivation, want=None):
        ctx = cw.conclusion.ctx
        out = []
        for i in range(type_depth(ctx)):
            k = lookup_kind(ctx, i)
            if want is None or isinstance(k, want):
                out.append(i)
        return out

    def any(self, cw: Derivation, size: int) -> Derivation:
        rng = self.rng
        vs = self.vars_of(cw)
        if size <= 1:
            pick = rng.choice(["top", "bot"] + ["var"] * (2 if vs else 0))
        else:
            pick = rng.choice(["arr", "all", "abs", "app", "app", "sing", "sub", "var", "top"])
        if pick == "var" and vs:
            return R.k_var(cw, rng.choice(vs))
        if pick == "top" or (pick == "var" and not vs):
            return R.k_top(cw)
        if pick == "bot":
            return R.k_bot(cw)
        if pick == "arr":
            return R.k_arr(self.proper(cw, size // 2), self.proper(cw, size // 2))
        if pick == "all":
            k = self.kind(cw, size // 2)
            return R.k_all(k, self.proper(R.c_tpbind(cw, k), size // 2))
        if pick == "abs":
            k = self.kind(cw, size // 2, 2)
            return R.k_abs(k, self.any(R.c_tpbind(cw, k), size // 2))
        if pick == "app":
            return self.app(cw, size)
        if pick == "sing":
            d = self.any(cw, size - 1)
            if not isinstance(d.conclusion.kind, Intv):
                d = self.saturate(cw, d, size)
            return R.k_sing(d)
        d = self.any(cw, size - 1)
        from ..derivations.admissible import sk_kmax
        return R.k_sub(d, sk_kmax(kinding_validity(d)))

    def operator(self, cw: Derivation, size: int) -> Derivation:
        vs = self.vars_of(cw, DArr)
        if vs and self.rng.random() < 0.5:
            return R.k_var(cw, self.rng.choice(vs))
        k = self.kind(cw, size // 2, 2)
        return R.k_abs(k, self.any(R.c_tpbind(cw, k), size // 2))

    def app(self, cw: Derivation, size: int) -> Derivation:
        f = self.operator(cw, size // 2)
        dom = kinding_validity(f).premises[0]
        return R.k_app(f, self.at(dom, size // 2))

    def saturate(self, cw: Derivation, d: Derivation, size: int) -> Derivation:
        while isinstance(d.conclusion.kind, DArr):
            dom = kinding_validity(d).premises[0]
            d = R.k_app(d, self.at(dom, max(1, size // 3)))
        return d

    def proper(self, cw: Derivation, size: int) -> Derivation:
        d = self.any(cw, size)
        if isinstance(d.conclusion.kind, DArr):
            d = self.saturate(cw, d, size)
        return to_star(d)

    def at(self, kd: Derivation, size: int) -> Derivation:
        """A type of the kind ``kd`` formats."""
        k = kd.conclusion.kind
        cw = S.ctx_wf_of_kd(kd)
        if isinstance(k, DArr):
            matching = [i for i in self.vars_of(cw) if lookup_kind(cw.conclusion.ctx, i) == k]
            if matching and self.rng.random() < 0.3:
                return R.k_var(cw, self.rng.choice(matching))
            return R.k_abs(kd.premises[0], self.at(kd.premises[1], max(1, size - 1)))
        candidates = [
            lambda: self.proper(cw, size),
            lambda: kd.premises[0],
            lambda: kd.premises[1],
            lambda: R.k_bot(cw),
        ]
        self.rng.shuffle(candidates)
        for make in candidates:
            d = S.coerce(make(), kd, depth=4)
            if d is not None:
                return d
        raise _Dead


def gen_context(rng: random.Random, size: int, max_bindings: int = 3):
    g = TypeGen(rng)
    cw = R.c_empty()
    for _ in range(rng.randint(0, max_bindings)):
        cw = R.c_tpbind(cw, g.kind(cw, max(2, size // 2)))
    return cw


def gen_wellkinded_type(seed: int, size: int = 10, max_kind_depth: int = 3):
    """(Γ, A, K, derivation of Γ ⊢ A : K), reproducible from ``seed``."""
    rng = random.Random(seed)
    for _ in range(_ATTEMPTS):
        try:
            g = TypeGen(rng, max_kind_depth)
            cw = gen_context(rng, size)
            d = g.any(cw, size)
        except (_Dead, PreconditionError):
            continue
        c = d.conclusion
        if kind_depth(c.kind) > max_kind_depth + 1:
            continue
        return c.ctx, c.ty, c.kind, d
    raise RuntimeError(f"no type generated for seed {seed}")


# ---------------------------------------------------------------- terms


class TermGen:
    """Forward generation of typing derivations for closed terms.

    Type abstractions bind proper variables with consistent bounds ``Bot .. A``
    or ``*``, so instantiation keeps types normal and closed programs cannot
    reflect absurd inequations.
    """

    def __init__(self, rng: random.Random) -> None:
        self.rng = rng
        self.types = TypeGen(rng, 1)

    def simple_type(self, cw: Derivation, size: int) -> Derivation:
        """A normal proper type built from Top, Bot, arrows, proper universals and variables."""
        rng = self.rng
        vs = [i for i in self.types.vars_of(cw) if isinstance(lookup_kind(cw.conclusion.ctx, i), Intv)]
        if size <= 1 or rng.random() < 0.3:
            opts = ["top", "bot"] + ["var"] * (3 if vs else 0)
            pick = rng.choice(opts)
            if pick == "var":
                return to_star(R.k_var(cw, rng.choice(vs)))
            return R.k_top(cw) if pick == "top" else R.k_bot(cw)
        if rng.random() < 0.65:
            return R.k_arr(self.simple_type(cw, size // 2), self.simple_type(cw, size // 2))
        k = self.bound(cw, size // 2)
        return R.k_all(k, self.simple_type(R.c_tpbind(cw, k), size // 2))

    def bound(self, cw: Derivation, size: int) -> Derivation:
        if self.rng.random() < 0.5:
            return wf_star(cw)
        return R.wf_intv(R.k_bot(cw), self.simple_type(cw, max(1, size)))

    def term(self, cw: Derivation, size: int) -> Derivation:
        rng = self.rng
        ctx = cw.conclusion.ctx
        tvars = list(range(term_depth(ctx)))
        if size <= 1:
            if tvars and rng.random() < 0.7:
                return R.t_var(cw, rng.choice(tvars))
            return self.abs(cw, 1)
        pick = rng.choice(["abs", "tabs", "app", "app", "tapp", "var"])
        if pick == "var" and tvars:
            return R.t_var(cw, rng.choice(tvars))
        if pick == "tabs":
            k = self.bound(cw, 2)
            return R.t_tabs(k, self.term(R.c_tpbind(cw, k), size - 1))
        if pick == "app":
            return self.app(cw, size)
        if pick == "tapp":
            return self.tapp(cw, size)
        return self.abs(cw, size)

    def redex(self, cw: Derivation, size: int) -> Derivation:
        """An application or instantiation, so that evaluation takes a step."""
        if self.rng.random() < 0.6:
            return self.app(cw, size)
        return self.tapp(cw, size)

    def abs(self, cw: Derivation, size: int) -> Derivation:
        a = self.simple_type(cw, 3)
        inner = R.c_tmbind(cw, a)
        body = self.term(inner, size - 1)
        b = S.synth_star(cw, body.conclusion.ty)
        return R.t_abs(a, _need(b), body)

    def app(self, cw: Derivation, size: int) -> Derivation:
        arg = self.term(cw, size // 2)
        a = S.synth_star(cw, arg.conclusion.ty)
        inner = R.c_tmbind(cw, _need(a))
        body = self.term(inner, max(1, size // 2 - 1))
        b = _need(S.synth_star(cw, body.conclusion.ty))
        fn = R.t_abs(a, b, body)
        return R.t_app(fn, arg)

    def tapp(self, cw: Derivation, size: int) -> Derivation:
        k = self.bound(cw, 2)
        body = self.term(R.c_tpbind(cw, k), size - 1)
        fn = R.t_tabs(k, body)
        hi = k.premises[1]
        pick = self.rng.random()
        if k.conclusion.kind.hi == TOP and pick < 0.5:
            c = self.simple_type(cw, 2)
        elif pick < 0.75:
            c = hi
        else:
            c = R.k_bot(cw)
        arg = _need(S.coerce(c, k, depth=4))
        return R.t_tapp(fn, arg)


def gen_welltyped_closed_term(seed: int, size: int = 8, redex: bool = False):
    """(t, A, derivation of ∅ ⊢ t : A), reproducible from ``seed``.

    With ``redex`` the term is an application or instantiation at the root.
    """
    rng = random.Random(seed)
    for _ in range(_ATTEMPTS):
        try:
            gen = TermGen(rng)
            d = (gen.redex if redex else gen.term)(R.c_empty(), size)
        except (_Dead, PreconditionError):
            continue
        return d.conclusion.term, d.conclusion.ty, d
    raise RuntimeError(f"no term generated for seed {seed}")


__all__ = ["TypeGen", "TermGen", "gen_context", "gen_wellkinded_type", "gen_welltyped_closed_term"]
