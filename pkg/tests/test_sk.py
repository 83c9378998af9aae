import random

import pytest
from hypothesis import given, strategies as st

from fomega.derivations.check import check
from fomega.derivations.rules import STAR
from fomega.derivations.search import ctx_wf
from fomega.engine import Yes, kind_check_fuel
from fomega.sk import (
    BOT_, IDX_K, IDX_OP, IDX_S, K_, S_, SKTrace, Step, TOP_, Confirmed, Inconclusive, TraceError,
    app, confluence_probe, contractions, derive_equation, derive_subtyping, encode_sk, gamma_sk,
    is_pure, par_reduce_ge, par_reduce_le, parse_sk, random_term, random_trace, replay,
    reverse_trace, rewrite, top_detour,
)
from fomega.syntax import App, DArr, Intv, SArr, STAR as S_SHAPE, TpVar, erase_kind

seeds = st.integers(min_value=0, max_value=10_000)


def op(f, a, at=IDX_OP):
    return App(App(TpVar(at), f), a)


def test_parse():
    assert parse_sk("S K (K S)") == app(S_, K_, app(K_, S_))
    assert parse_sk("K Top Bot") == app(K_, TOP_, BOT_)
    for bad in ("S (K", "X", "S )", ""):
        with pytest.raises(ValueError):
            parse_sk(bad)


def test_rewrite_and_replay():
    t = parse_sk("K S K")
    assert rewrite(t, Step((), "K-contract")) == S_
    assert rewrite(S_, Step((), "K-expand", K_)) == t
    s3 = parse_sk("S K K S")
    assert rewrite(s3, Step((), "S-contract")) == parse_sk("K S (K S)")
    assert rewrite(parse_sk("K S (K S)"), Step((), "S-expand")) == s3
    with pytest.raises(TraceError):
        rewrite(S_, Step((), "K-contract"))
    trace = SKTrace((Step((), "S-contract"), Step((), "K-contract")))
    assert replay(s3, trace) == [s3, parse_sk("K S (K S)"), S_]


@given(seeds)
def test_reverse_trace_returns_to_the_start(seed):
    rng = random.Random(seed)
    s, trace, t = random_trace(rng, rng.randint(1, 6), rng.randint(0, 8))
    assert replay(s, trace)[-1] == t
    back = reverse_trace(s, trace)
    assert replay(t, back)[-1] == s
    assert len(back) == len(trace)


def test_contractions_find_every_redex():
    t = parse_sk("K (K S K) S")
    rules = sorted((st.position, st.rule) for st in contractions(t))
    assert rules == [((), "K-contract"), ((0, 1), "K-contract")]


def test_signature():
    g = gamma_sk()
    assert len(g) == 7
    x, y, z = TpVar(2), TpVar(1), TpVar(0)
    # binding 4 sees only S, K and the operator, then its own X, Y, Z
    s, at = TpVar(5), 3
    lo = op(op(op(s, x, at), y, at), z, at)
    hi = op(op(x, z, at), op(y, z, at), at)
    assert g[3].kind == DArr(STAR, DArr(STAR, DArr(STAR, Intv(lo, hi))))
    assert ctx_wf(g) is not None and check(ctx_wf(g))
    for b in g[3:]:
        shape = erase_kind(b.kind)
        while isinstance(shape, SArr):
            assert shape.dom == S_SHAPE
            shape = shape.cod
        assert shape == S_SHAPE


def test_encoding():
    assert encode_sk(S_) == TpVar(IDX_S)
    assert encode_sk(app(K_, S_)) == op(TpVar(IDX_K), TpVar(IDX_S))
    assert encode_sk(parse_sk("K S")) != encode_sk(parse_sk("S K"))


@given(seeds, seeds)
def test_encoding_is_injective_and_proper(s1, s2):
    a = random_term(random.Random(s1), 5)
    b = random_term(random.Random(s2), 5)
    assert (encode_sk(a) == encode_sk(b)) == (a == b)
    r = kind_check_fuel(gamma_sk(), encode_sk(a), STAR, 10_000)
    assert isinstance(r, Yes)


def test_root_k_contraction_derivation():
    s, t = S_, K_
    d = derive_subtyping(app(K_, s, t), s, SKTrace((Step((), "K-contract"),)))
    assert check(d)
    c = d.conclusion
    assert c.lo == encode_sk(app(K_, s, t)) and c.hi == encode_sk(s) and c.kind == STAR


def test_empty_trace_is_reflexivity():
    d = derive_subtyping(S_, S_, SKTrace())
    assert d.rule == "ST-Refl" and check(d)


def test_equations_check_both_ways():
    s = parse_sk("S K K S")
    trace = SKTrace((Step((), "S-contract"), Step((), "K-contract")))
    d = derive_equation(s, S_, trace)
    assert check(d)


def test_parallel_reduction():
    u = parse_sk("S K")
    assert S_ in par_reduce_le(parse_sk("K S K"))
    assert u in par_reduce_le(BOT_, {u})
    assert u in par_reduce_ge(TOP_, {u})
    assert u not in par_reduce_le(TOP_, {u})


@given(seeds)
def test_pure_terms_never_gain_bot_or_top(seed):
    t = random_term(random.Random(seed), 6)
    for u in par_reduce_le(t) | par_reduce_ge(t):
        assert is_pure(u)


def test_probe():
    s = parse_sk("K S K")
    r = confluence_probe(s, S_)
    assert isinstance(r, Confirmed) and r.meet == S_
    assert replay(s, r.trace)[-1] == S_
    assert isinstance(confluence_probe(S_, S_), Confirmed)
    far = confluence_probe(S_, K_, budget=50)
    assert isinstance(far, Inconclusive) and not far


def test_top_detour():
    d = top_detour()
    assert check(d)
    assert d.conclusion.lo == d.conclusion.hi == encode_sk(S_)
    with pytest.raises(ValueError):
        confluence_probe(TOP_, S_)
