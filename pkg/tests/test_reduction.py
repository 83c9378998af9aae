from hypothesis import given, strategies as st

from fomega.derivations.rules import STAR
from fomega.engine import kind_check_fuel, No
from fomega.engine.generate import gen_welltyped_closed_term, gen_wellkinded_type
from fomega.normalizer import nf_ctx, nf_kind, nf_type
from fomega.reduction import (
    FuelExhausted, beta_redexes, beta_reduce, beta_step, cbv_step, is_beta_normal, is_stuck,
    is_value, replace_at, subterm_at,
)
from fomega.syntax import (
    All, App, Arr, BOT, Intv, Lam, TOP, TmAbs, TmApp, TmTAbs, TmTApp, TmVar, TpVar, type_fv,
)

from test_acceptance import BOUNDED, OMEGA
from fomega.cli.surface import parse_type, scope_of_names

seeds = st.integers(min_value=0, max_value=10_000)
IDENT = Lam(STAR, TpVar(0))
OMEGA_T = parse_type(OMEGA, scope_of_names([]))


def test_redexes():
    assert beta_redexes(App(IDENT, TOP)) == [((), TOP)]
    assert beta_redexes(TOP) == []
    [(pos, contractum)] = beta_redexes(OMEGA_T)
    assert pos == () and contractum == OMEGA_T


def test_redexes_inside_kinds():
    k = Intv(App(IDENT, TOP), BOT)
    [(pos, contractum)] = beta_redexes(k)
    assert contractum == TOP
    assert replace_at(k, pos, contractum) == Intv(TOP, BOT)
    assert subterm_at(k, pos) == App(IDENT, TOP)


def test_beta_reduce():
    applied = parse_type(f"({BOUNDED}) Top (lam X : *. X -> X)", scope_of_names([]))
    out, steps = beta_reduce(applied)
    assert out == All(Intv(BOT, TOP), Arr(TpVar(0), TpVar(0)))
    assert steps == 3  # two operator applications and the inner F X
    assert beta_reduce(TOP) == (TOP, 0)
    r = beta_reduce(OMEGA_T, 10)
    assert isinstance(r, FuelExhausted) and r.steps == 10


def test_leftmost_outermost():
    inner = App(IDENT, BOT)
    outer = App(Lam(STAR, TOP), inner)
    assert beta_step(outer) == TOP  # the outer redex discards the inner one
    assert is_beta_normal(Arr(TOP, BOT))


@given(seeds)
def test_reducts_stay_well_scoped_and_keep_their_kind(seed):
    ctx, a, k, _ = gen_wellkinded_type(seed, 8)
    nctx = nf_ctx(ctx)
    depth = sum(1 for b in ctx if hasattr(b, "kind"))
    for _, contractum in beta_redexes(a):
        assert all(i < depth + 64 for i in type_fv(contractum))
    b = beta_step(a)
    if b is not None:
        assert max(type_fv(b), default=-1) < depth
        r = kind_check_fuel(nctx, nf_type(ctx, b), nf_kind(ctx, k))
        assert not isinstance(r, No)


def test_cbv():
    ident = TmAbs(TOP, TmVar(0))
    assert cbv_step(TmApp(ident, TmAbs(TOP, TmVar(0)))) == TmAbs(TOP, TmVar(0))
    poly = TmTAbs(STAR, TmAbs(TpVar(0), TmVar(0)))
    assert cbv_step(TmTApp(poly, TOP)) == TmAbs(TOP, TmVar(0))
    assert cbv_step(ident) is None
    assert is_value(ident) and not is_value(TmVar(0)) and not is_value(TmApp(ident, ident))


def test_cbv_order_and_stuck():
    ident = TmAbs(TOP, TmVar(0))
    redex = TmApp(ident, ident)
    # function position first, then the argument
    assert cbv_step(TmApp(redex, redex)) == TmApp(ident, redex)
    assert cbv_step(TmApp(ident, redex)) == TmApp(ident, ident)
    stuck = TmApp(TmTAbs(STAR, ident), ident)
    assert cbv_step(stuck) is None and is_stuck(stuck)


@given(seeds)
def test_cbv_is_deterministic(seed):
    t, _, _ = gen_welltyped_closed_term(seed, 8, redex=True)
    assert cbv_step(t) == cbv_step(t)
    assert cbv_step(t) is not None
