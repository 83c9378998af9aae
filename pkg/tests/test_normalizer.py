from hypothesis import given, strategies as st

from fomega.cli.surface import parse_type, scope_of_names
from fomega.derivations.rules import STAR
from fomega.engine.generate import gen_wellkinded_type
from fomega.normalizer import eta_expand, eta_strip, nf, nf_ctx, nf_kind, nf_type, normalize
from fomega.simple import shape_context, simple_kind_synth, simple_wf_kind
from fomega.syntax import All, App, Arr, DArr, Intv, Lam, TOP, TpBind, TpVar, erase_kind

from test_acceptance import BOUNDED, OMEGA

seeds = st.integers(min_value=0, max_value=10_000)
OP = DArr(STAR, STAR)


def test_eta_expand():
    assert eta_expand(Intv(TpVar(0), TOP), TpVar(5)) == TpVar(5)
    assert eta_expand(OP, TpVar(0)) == Lam(STAR, App(TpVar(1), TpVar(0)))
    hi = DArr(OP, STAR)
    inner = Lam(STAR, App(TpVar(1), TpVar(0)))
    assert eta_expand(hi, TpVar(0)) == Lam(OP, App(TpVar(1), inner))


def test_golden_normal_forms():
    sc = scope_of_names([])
    applied = parse_type(f"({BOUNDED}) Top (lam X : *. X -> X)", sc)
    assert nf(( ), applied) == All(STAR, Arr(TpVar(0), TpVar(0)))
    omega = parse_type(OMEGA, sc)
    assert nf((), omega) == omega


def test_variables_are_eta_expanded_at_their_kind():
    ctx = (TpBind(OP),)
    assert nf_type(ctx, TpVar(0)) == Lam(STAR, App(TpVar(1), TpVar(0)))
    assert eta_strip(nf_type(ctx, TpVar(0))) == TpVar(0)


def test_context_normalization():
    ctx = (TpBind(STAR), TpBind(Intv(App(Lam(STAR, TpVar(0)), TpVar(0)), TOP)))
    assert nf_ctx(ctx) == (TpBind(STAR), TpBind(Intv(TpVar(0), TOP)))
    assert nf_kind(ctx, Intv(App(Lam(STAR, TOP), TOP), TOP)) == Intv(TOP, TOP)
    assert normalize(ctx, TOP) == TOP


@given(seeds)
def test_output_is_simply_kinded_and_idempotent(seed):
    ctx, a, k, _ = gen_wellkinded_type(seed, 8)
    nctx = nf_ctx(ctx)
    v, nk = nf_type(ctx, a), nf_kind(ctx, k)
    gamma = shape_context(nctx)
    assert simple_kind_synth(gamma, v) == erase_kind(k)
    assert simple_wf_kind(gamma, nk)
    assert nf_ctx(nctx) == nctx
    assert nf_type(nctx, v) == v
    assert nf_kind(nctx, nk) == nk
