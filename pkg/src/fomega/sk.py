"""SK combinators encoded as types under a signature of reflected equations.

The signature binds, from left to right, ``S : *``, ``K : *``,
``⊕ : * -> * -> *`` and four operator variables whose interval kinds state
the S and K laws in each direction::

    position 3  Y_S→ : (X:*) -> (Y:*) -> (Z:*) -> S⊕X⊕Y⊕Z .. X⊕Z⊕(Y⊕Z)
    position 4  Y_S← : (X:*) -> (Y:*) -> (Z:*) -> X⊕Z⊕(Y⊕Z) .. S⊕X⊕Y⊕Z
    position 5  Y_K→ : (X:*) -> (Y:*) -> K⊕X⊕Y .. X
    position 6  Y_K← : (X:*) -> (Y:*) -> X .. K⊕X⊕Y

``⊕`` associates to the left. A rewrite step at a position becomes a type
equation (each law holds in both directions, so the two bound projections
give both inequations), lifted through ``⊕`` by ``ST-App`` with reflexive
operators. A trace becomes a transitive chain of these equations.

Positions are paths of ``0`` (operator side) and ``1`` (argument side).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .derivations import admissible as A
from .derivations import rules as R
from .derivations.judgments import Derivation
from .syntax import BOT, TOP, App as TApp, DArr, Intv, TpBind, TpVar

STAR = R.STAR


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class S:
    def __str__(self) -> str:
        return "S"


@dataclass(frozen=True)
class K:
    def __str__(self) -> str:
        return "K"


@dataclass(frozen=True)
class XBot:
    def __str__(self) -> str:
        return "Bot"


@dataclass(frozen=True)
class XTop:
    def __str__(self) -> str:
        return "Top"


@dataclass(frozen=True)
class App:
    fn: object
    arg: object

    def __str__(self) -> str:
        right = f"({self.arg})" if isinstance(self.arg, App) else str(self.arg)
        return f"{self.fn} {right}"


SKTerm = S | K | App
ExtTerm = S | K | XBot | XTop | App

S_ = S()
K_ = K()
BOT_ = XBot()
TOP_ = XTop()


def app(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = App(out, t)
    return out


def is_pure(t) -> bool:
    if isinstance(t, App):
        return is_pure(t.fn) and is_pure(t.arg)
    return isinstance(t, (S, K))


def sk_size(t) -> int:
    return 1 + sk_size(t.fn) + sk_size(t.arg) if isinstance(t, App) else 1


def subterms(t) -> set:
    out = {t}
    if isinstance(t, App):
        out |= subterms(t.fn) | subterms(t.arg)
    return out


def parse_sk(text: str):
    """Read ``S``, ``K``, ``Top``, ``Bot``, juxtaposition and parentheses."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def atom():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of SK term")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            t = seq()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError("expected ')'")
            pos += 1
            return t
        leaf = {"S": S_, "K": K_, "Top": TOP_, "Bot": BOT_}.get(tok)
        if leaf is None:
            raise ValueError(f"unknown SK token {tok!r}")
        return leaf

    def seq():
        t = atom()
        while pos < len(tokens) and tokens[pos] != ")":
            t = App(t, atom())
        return t

    t = seq()
    if pos != len(tokens):
        raise ValueError("trailing input in SK term")
    return t


# ---------------------------------------------------------------- traces


RULES = ("S-contract", "S-expand", "K-contract", "K-expand")


@dataclass(frozen=True)
class Step:
    position: tuple
    rule: str
    arg: object = None  # the discarded term introduced by K-expand


@dataclass(frozen=True)
class SKTrace:
    steps: tuple = ()

    def __len__(self) -> int:
        return len(self.steps)


class TraceError(ValueError):
    pass


def _at(t, pos):
    for p in pos:
        if not isinstance(t, App):
            raise TraceError(f"position {pos} does not exist")
        t = t.arg if p else t.fn
    return t


def _replace(t, pos, new):
    if not pos:
        return new
    if not isinstance(t, App):
        raise TraceError(f"position {pos} does not exist")
    if pos[0]:
        return App(t.fn, _replace(t.arg, pos[1:], new))
    return App(_replace(t.fn, pos[1:], new), t.arg)


def _s_redex(t):
    """(x, y, z) when t = S x y z."""
    if (isinstance(t, App) and isinstance(t.fn, App) and isinstance(t.fn.fn, App)
            and t.fn.fn.fn == S_):
        return t.fn.fn.arg, t.fn.arg, t.arg
    return None


def _s_reduct(t):
    """(x, y, z) when t = x z (y z)."""
    if (isinstance(t, App) and isinstance(t.fn, App) and isinstance(t.arg, App)
            and t.fn.arg == t.arg.arg):
        return t.fn.fn, t.arg.fn, t.fn.arg
    return None


def _k_redex(t):
    if isinstance(t, App) and isinstance(t.fn, App) and t.fn.fn == K_:
        return t.fn.arg, t.arg
    return None


def rewrite(t, step: Step):
    """Apply one step at its position."""
    sub = _at(t, step.position)
    if step.rule == "S-contract":
        m = _s_redex(sub)
        if m is None:
            raise TraceError("no S redex at position")
        x, y, z = m
        new = App(App(x, z), App(y, z))
    elif step.rule == "S-expand":
        m = _s_reduct(sub)
        if m is None:
            raise TraceError("no S reduct at position")
        new = app(S_, *m)
    elif step.rule == "K-contract":
        m = _k_redex(sub)
        if m is None:
            raise TraceError("no K redex at position")
        new = m[0]
    elif step.rule == "K-expand":
        if step.arg is None:
            raise TraceError("K-expand needs the discarded term")
        new = app(K_, sub, step.arg)
    else:
        raise TraceError(f"unknown rule {step.rule!r}")
    return _replace(t, step.position, new)


def replay(s, trace: SKTrace) -> list:
    terms = [s]
    for st in trace.steps:
        terms.append(rewrite(terms[-1], st))
    return terms


def invert(before, step: Step) -> Step:
    """The step that undoes ``step`` applied to ``before``."""
    sub = _at(before, step.position)
    if step.rule == "S-contract":
        return Step(step.position, "S-expand")
    if step.rule == "S-expand":
        return Step(step.position, "S-contract")
    if step.rule == "K-contract":
        return Step(step.position, "K-expand", _k_redex(sub)[1])
    return Step(step.position, "K-contract")


def reverse_trace(s, trace: SKTrace) -> SKTrace:
    terms = replay(s, trace)
    return SKTrace(tuple(invert(terms[i], st) for i, st in reversed(list(enumerate(trace.steps)))))


def _positions(t, prefix=()):
    yield prefix
    if isinstance(t, App):
        yield from _positions(t.fn, prefix + (0,))
        yield from _positions(t.arg, prefix + (1,))


def contractions(t):
    """Every single contraction step applicable to ``t``."""
    for pos in _positions(t):
        sub = _at(t, pos)
        if _s_redex(sub) is not None:
            yield Step(pos, "S-contract")
        if _k_redex(sub) is not None:
            yield Step(pos, "K-contract")


def random_term(rng: random.Random, size: int):
    if size <= 1:
        return rng.choice((S_, K_))
    left = rng.randint(1, size - 1)
    return App(random_term(rng, left), random_term(rng, size - left))


def random_trace(rng: random.Random, size: int, length: int, max_size: int = 40):
    """A random pure term and a valid trace of up to ``length`` steps from it."""
    t = random_term(rng, size)
    start, steps = t, []
    for _ in range(length):
        options = list(contractions(t))
        for pos in _positions(t):
            sub = _at(t, pos)
            if _s_reduct(sub) is not None:
                options.append(Step(pos, "S-expand"))
            options.append(Step(pos, "K-expand", random_term(rng, rng.randint(1, 3))))
        rng.shuffle(options)
        for st in options:
            nxt = rewrite(t, st)
            if sk_size(nxt) <= max_size:
                steps.append(st)
                t = nxt
                break
    return start, SKTrace(tuple(steps)), t


# ---------------------------------------------------------------- the signature and encoding

IDX_S, IDX_K, IDX_OP = 6, 5, 4
IDX_S_FWD, IDX_S_BWD, IDX_K_FWD, IDX_K_BWD = 3, 2, 1, 0


def _op(a, b, op):
    return TApp(TApp(TpVar(op), a), b)


def _law_kind(position: int, law: str):
    """The kind of the law variable bound at ``position`` of the signature."""
    # S, K and ⊕ sit at positions 0, 1, 2; the binders X, Y (, Z) come on top
    arity = 3 if law.startswith("S") else 2
    s, k, op = (position - 1 + arity, position - 2 + arity, position - 3 + arity)
    if arity == 3:
        x, y, z = TpVar(2), TpVar(1), TpVar(0)
        redex = _op(_op(_op(TpVar(s), x, op), y, op), z, op)
        reduct = _op(_op(x, z, op), _op(y, z, op), op)
    else:
        x, y = TpVar(1), TpVar(0)
        redex = _op(_op(TpVar(k), x, op), y, op)
        reduct = x
    body = Intv(redex, reduct) if law.endswith("→") else Intv(reduct, redex)
    for _ in range(arity):
        body = DArr(STAR, body)
    return body


def gamma_sk() -> tuple:
    """S : *, K : *, ⊕ : * -> * -> *, then Y_S→, Y_S←, Y_K→, Y_K←."""
    ctx = (TpBind(STAR), TpBind(STAR), TpBind(DArr(STAR, DArr(STAR, STAR))))
    for position, law in enumerate(("S→", "S←", "K→", "K←"), start=3):
        ctx = ctx + (TpBind(_law_kind(position, law)),)
    return ctx


def encode_sk(t, shift: int = 0):
    """The type encoding of a (possibly extended) SK term under the signature."""
    match t:
        case S():
            return TpVar(IDX_S + shift)
        case K():
            return TpVar(IDX_K + shift)
        case XTop():
            return TOP
        case XBot():
            return BOT
        case App(f, a):
            return _op(encode_sk(f, shift), encode_sk(a, shift), IDX_OP + shift)
    raise TypeError(f"not an SK term: {t!r}")


# ---------------------------------------------------------------- derivations


class _Builder:
    def __init__(self) -> None:
        from .derivations.search import ctx_wf

        self.cw = ctx_wf(gamma_sk())
        self._kinds: dict = {}

    def kinding(self, t) -> Derivation:
        """Γ_SK ⊢ ⟦t⟧ : *."""
        d = self._kinds.get(t)
        if d is None:
            match t:
                case XTop():
                    d = R.k_top(self.cw)
                case XBot():
                    d = R.k_bot(self.cw)
                case App(f, a):
                    d = R.k_app(R.k_app(R.k_var(self.cw, IDX_OP), self.kinding(f)), self.kinding(a))
                case _:
                    d = R.k_var(self.cw, encode_sk(t).index)
            self._kinds[t] = d
        return d

    def law(self, var: int, args) -> Derivation:
        d = R.k_var(self.cw, var)
        for a in args:
            d = R.k_app(d, self.kinding(a))
        return d

    def through(self, var: int, args) -> Derivation:
        """lower <= upper, projecting both bounds of an instantiated law variable."""
        d = self.law(var, args)
        return R.st_trans(R.st_bnd1(d), R.st_bnd2(d))

    def root_eq(self, sub, rule: str, arg) -> Derivation:
        if rule == "S-contract":
            xs = _s_redex(sub)
            fwd, bwd = self.through(IDX_S_FWD, xs), self.through(IDX_S_BWD, xs)
        elif rule == "S-expand":
            xs = _s_reduct(sub)
            fwd, bwd = self.through(IDX_S_BWD, xs), self.through(IDX_S_FWD, xs)
        elif rule == "K-contract":
            xs = _k_redex(sub)
            fwd, bwd = self.through(IDX_K_FWD, xs), self.through(IDX_K_BWD, xs)
        else:
            xs = (sub, arg)
            fwd, bwd = self.through(IDX_K_BWD, xs), self.through(IDX_K_FWD, xs)
        return R.st_antisym(fwd, bwd)

    def lift(self, u, pos, eq: Derivation) -> Derivation:
        """One inequation of ⟦u⟧ against ⟦u⟧ with the subterm at ``pos[0]`` rewritten by ``eq``."""
        op = R.k_var(self.cw, IDX_OP)
        if pos[0]:
            return R.st_app(R.st_refl(R.k_app(op, self.kinding(u.fn))), eq)
        return R.st_app(R.st_app(R.st_refl(op), eq), A.teq_refl(self.kinding(u.arg)))

    def step_eq(self, t, step: Step) -> Derivation:
        """Γ_SK ⊢ ⟦t⟧ = ⟦t'⟧ : * for one rewrite step."""
        def go(u, pos):
            if not pos:
                return self.root_eq(u, step.rule, step.arg)
            inner = go(u.arg if pos[0] else u.fn, pos[1:])
            return R.st_antisym(self.lift(u, pos, inner), self.lift(u, pos, A.teq_sym(inner)))

        return go(t, step.position)


def derive_subtyping(s, t, trace: SKTrace) -> Derivation:
    """Γ_SK ⊢ ⟦s⟧ <= ⟦t⟧ : * from a trace rewriting ``s`` into ``t``."""
    terms = replay(s, trace)
    if terms[-1] != t:
        raise TraceError("trace does not end at the target term")
    b = _Builder()
    if not trace.steps:
        return R.st_refl(b.kinding(s))
    links = [b.step_eq(u, st).premises[0] for u, st in zip(terms, trace.steps)]
    return R.trans_chain(*links)


def derive_equation(s, t, trace: SKTrace) -> Derivation:
    """Γ_SK ⊢ ⟦s⟧ = ⟦t⟧ : * from a trace."""
    terms = replay(s, trace)
    if terms[-1] != t:
        raise TraceError("trace does not end at the target term")
    b = _Builder()
    if not trace.steps:
        return A.teq_refl(b.kinding(s))
    eq = b.step_eq(terms[0], trace.steps[0])
    for u, st in zip(terms[1:], trace.steps[1:]):
        eq = A.teq_trans(eq, b.step_eq(u, st))
    return eq


def top_detour() -> Derivation:
    """S <= K⊕S⊕(K⊕Top⊕S) <= K⊕S⊕Top <= S, passing through Top."""
    b = _Builder()
    kts = app(K_, TOP_, S_)
    # S <= K S (K Top S) by the backward K law
    first = b.through(IDX_K_BWD, (S_, kts))
    # K Top S = Top: Top is maximal, and Top <= K Top S by the backward K law
    kts_top = R.st_antisym(R.st_top(b.kinding(kts)), b.through(IDX_K_BWD, (TOP_, S_)))
    second = b.lift(app(K_, S_, kts), (1,), kts_top)
    # K S Top <= S by the forward K law
    third = b.through(IDX_K_FWD, (S_, TOP_))
    return R.trans_chain(first, second, third)


# ---------------------------------------------------------------- parallel reductions


_PAR_LIMIT = 4096


def _par(t, absorb, universe) -> set:
    out = {t}
    if t == absorb:
        out |= set(universe)
    if isinstance(t, App):
        for f in _par(t.fn, absorb, universe):
            for a in _par(t.arg, absorb, universe):
                out.add(App(f, a))
                if len(out) > _PAR_LIMIT:
                    raise OverflowError("parallel reduct set too large")
        k = _k_redex(t)
        if k is not None:
            out |= _par(k[0], absorb, universe)
        m = _s_redex(t)
        if m is not None:
            x, y, z = m
            zs = _par(z, absorb, universe)
            for x2 in _par(x, absorb, universe):
                for y2 in _par(y, absorb, universe):
                    for z2 in zs:
                        for z3 in zs:
                            out.add(App(App(x2, z2), App(y2, z3)))
                            if len(out) > _PAR_LIMIT:
                                raise OverflowError("parallel reduct set too large")
    return out


def par_reduce_le(e, universe=None) -> set:
    """One parallel step of ⇒≤: S and K contractions plus ``Bot ⇒≤ u``.

    The targets ``u`` of the Bot rule range over ``universe`` (by default the
    subterms of ``e``).
    """
    return _par(e, BOT_, subterms(e) if universe is None else universe)


def par_reduce_ge(e, universe=None) -> set:
    """One parallel step of ⇒≥: S and K contractions plus ``Top ⇒≥ u``."""
    return _par(e, TOP_, subterms(e) if universe is None else universe)


@dataclass(frozen=True)
class Confirmed:
    meet: object
    trace: SKTrace

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Inconclusive:
    explored: int

    def __bool__(self) -> bool:
        return False


def _reach(start, budget: int, max_size: int):
    """Breadth-first contraction closure with parent links."""
    parent = {start: None}
    queue = deque([start])
    while queue and len(parent) < budget:
        t = queue.popleft()
        for st in contractions(t):
            u = rewrite(t, st)
            if u not in parent and sk_size(u) <= max_size:
                parent[u] = (t, st)
                queue.append(u)
    return parent


def _path(parent, u) -> list:
    steps = []
    while parent[u] is not None:
        t, st = parent[u]
        steps.append(st)
        u = t
    return steps[::-1]


def confluence_probe(s, t, budget: int = 2000, max_size: int = 60):
    """Search for a common contractum of two pure terms.

    On pure terms the Bot and Top rules never fire, so ⇒≤* is the
    reflexive-transitive closure of single contractions, which is what is
    explored here. A success carries a replayable trace from ``s`` to ``t``.
    This is a bounded search, not a decision procedure.
    """
    if not (is_pure(s) and is_pure(t)):
        raise ValueError("confluence_probe needs pure SK terms")
    left = _reach(s, budget, max_size)
    right = _reach(t, budget, max_size)
    common = [u for u in left if u in right]
    if not common:
        return Inconclusive(len(left) + len(right))
    meet = min(common, key=sk_size)
    down = _path(left, meet)
    up_from_t = _path(right, meet)
    back = reverse_trace(t, SKTrace(tuple(up_from_t)))
    trace = SKTrace(tuple(down) + back.steps)
    if replay(s, trace)[-1] != t:
        raise AssertionError("probe trace does not replay")
    return Confirmed(meet, trace)


__all__ = [
    "S", "K", "XBot", "XTop", "App", "SKTerm", "ExtTerm", "S_", "K_", "BOT_", "TOP_", "app",
    "is_pure", "sk_size", "subterms", "parse_sk", "Step", "SKTrace", "TraceError", "RULES",
    "rewrite", "replay", "reverse_trace", "contractions", "random_term", "random_trace",
    "gamma_sk", "encode_sk", "derive_subtyping", "derive_equation", "top_detour",
    "par_reduce_le", "par_reduce_ge", "Confirmed", "Inconclusive", "confluence_probe",
    "IDX_S", "IDX_K", "IDX_OP", "IDX_S_FWD", "IDX_S_BWD", "IDX_K_FWD", "IDX_K_BWD",
]
