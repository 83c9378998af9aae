from hypothesis import given, strategies as st

from fomega.derivations.rules import STAR
from fomega.engine.generate import gen_wellkinded_type
from fomega.normalizer import nf_ctx, nf_type
from fomega.simple import (
    is_normal_at, ne_app_kind, shape_context, simple_check, simple_kind_synth, simple_ne_kind,
    simple_spine_kind, simple_wf_kind, spine_concat_kind, spine_snoc_kind,
)
from fomega.syntax import (
    STAR as S, All, App, Arr, BOT, DArr, Intv, Lam, SArr, TOP, TpBind, TpVar, erase_kind,
    shift_type,
)

seeds = st.integers(min_value=0, max_value=10_000)
OP = SArr(S, S)
OP2 = SArr(S, OP)


def test_wf_kind():
    assert simple_wf_kind((), STAR)
    assert not simple_wf_kind((), Intv(BOT, Lam(STAR, TpVar(0))))
    assert simple_wf_kind((S,), DArr(STAR, Intv(TpVar(1), TpVar(1))))


def test_kind_synth():
    assert simple_kind_synth((), TOP) == S
    assert simple_kind_synth((OP,), TpVar(0)) is None
    assert simple_kind_synth((OP,), Lam(STAR, App(TpVar(1), TpVar(0)))) == OP
    assert simple_kind_synth((), All(STAR, Arr(TpVar(0), BOT))) == S
    # a β-redex is never a normal form
    assert simple_kind_synth((), App(Lam(STAR, TpVar(0)), TOP)) is None
    assert simple_check((), TOP, S) and not simple_check((), TOP, OP)


def test_spine_kind():
    assert simple_spine_kind((), OP, ()) == OP
    assert simple_spine_kind((), OP, (TOP,)) == S
    assert simple_spine_kind((), S, (TOP,)) is None


def test_admissible_spine_rules():
    left, right = (TOP,), (BOT,)
    assert spine_concat_kind((), OP2, left, right) == simple_spine_kind((), OP2, left + right) == S
    assert spine_snoc_kind((), OP2, left, BOT) == S
    assert ne_app_kind((OP2,), App(TpVar(0), TOP), BOT) == S
    assert simple_ne_kind((OP2,), App(TpVar(0), TOP)) == OP


def test_normality_in_a_full_context():
    ctx = (TpBind(DArr(STAR, STAR)),)
    assert not is_normal_at(ctx, TpVar(0), OP)
    assert is_normal_at(ctx, Lam(STAR, App(TpVar(1), TpVar(0))), OP)


@given(seeds)
def test_weakening(seed):
    ctx, a, k, _ = gen_wellkinded_type(seed, 8)
    gamma = shape_context(nf_ctx(ctx))
    v = nf_type(ctx, a)
    j = simple_kind_synth(gamma, v)
    assert j == erase_kind(k)
    for extra in (S, OP):
        assert simple_kind_synth(gamma + (extra,), shift_type(v, 1)) == j
