import random

from hypothesis import given, strategies as st

from fomega.derivations.check import check
from fomega.derivations.rules import STAR
from fomega.engine import (
    No, Stuck, Unknown, Value, Yes, cbv_eval, gen_welltyped_closed_term, gen_wellkinded_type,
    kind_synth, open_counterexample, safety_harness, subkind_fuel, subtype_fuel, tf_subtype,
    type_synth_term,
)
from fomega.engine.brute import closed_normal_types, provable
from fomega.engine.canonical import ctx_wf_canonical
from fomega.reduction import FuelExhausted
from fomega.syntax import (
    All, App, Arr, BOT, DArr, Intv, Lam, TOP, TmAbs, TmApp, TmTAbs, TmTApp, TmVar, TpBind,
    TpVar,
)

seeds = st.integers(min_value=0, max_value=10_000)
POLY_ID = TmTAbs(STAR, TmAbs(TpVar(0), TmVar(0)))
A_ID = All(STAR, Arr(TpVar(0), TpVar(0)))


def test_subtyping_through_an_absurd_bound():
    ctx = (TpBind(Intv(TOP, BOT)),)
    r = subtype_fuel(ctx, TOP, BOT, 100)
    assert isinstance(r, Yes)
    assert check(r.witness)
    assert {"CST-Bnd1", "CST-Bnd2"} & r.witness.rules_used()


def test_subtyping_examples():
    assert isinstance(subtype_fuel((), TOP, BOT, 10_000), No)
    assert isinstance(subtype_fuel((), BOT, All(STAR, TpVar(0)), 10), Yes)
    assert isinstance(subkind_fuel((), Intv(TOP, TOP), STAR, 100), Yes)
    assert isinstance(subkind_fuel((), STAR, Intv(TOP, TOP), 100), No)


def test_fuel_is_respected():
    r = subtype_fuel((TpBind(Intv(TOP, BOT)),), TOP, BOT, 1)
    assert isinstance(r, Unknown)


def test_kind_synth():
    assert kind_synth((), TOP) == Intv(TOP, TOP)
    ctx = (TpBind(DArr(STAR, STAR)),)
    ne = App(TpVar(1), TpVar(0))
    assert kind_synth(ctx, Lam(STAR, ne)) == DArr(STAR, Intv(ne, ne))
    assert kind_synth((), Lam(STAR, App(TpVar(0), TpVar(0)))) is None


def test_top_level_subtyping():
    assert tf_subtype(Arr(TOP, BOT), TOP).holds
    assert not tf_subtype(Arr(TOP, BOT), All(STAR, TpVar(0))).holds
    r = tf_subtype(All(STAR, TpVar(0)), All(Intv(BOT, BOT), TpVar(0)))
    assert r.holds and check(r.witness)


def test_top_level_agrees_with_bounded_search_on_small_types():
    types = closed_normal_types(3)
    for u in types:
        for v in types:
            assert tf_subtype(u, v).holds == provable((), u, v, 4)


def test_term_typing():
    assert type_synth_term((), POLY_ID).ty == A_ID
    r = type_synth_term((), TmTApp(POLY_ID, TOP))
    assert r.ty == Arr(TOP, TOP) and check(r.derivation)
    assert type_synth_term((), TmApp(POLY_ID, TmAbs(TOP, TmVar(0)))) is None


def test_term_typing_uses_a_reflected_inequation():
    lo, hi = Arr(A_ID, A_ID), Arr(A_ID, Arr(A_ID, A_ID))
    ctx = (TpBind(Intv(lo, hi)),)
    t = TmApp(TmAbs(hi, TmVar(0)), TmAbs(A_ID, TmVar(0)))
    r = type_synth_term(ctx, t)
    assert r is not None and r.ty == hi
    assert check(r.derivation)
    assert type_synth_term((), t) is None


def test_evaluation():
    ident = TmAbs(TOP, TmVar(0))
    assert isinstance(cbv_eval(TmApp(ident, TmAbs(TOP, TmVar(0)))), Value)
    assert isinstance(cbv_eval(TmApp(POLY_ID, ident)), Stuck)
    self_app = TmAbs(TOP, TmApp(TmVar(0), TmVar(0)))
    r = cbv_eval(TmApp(self_app, self_app), 50)
    assert isinstance(r, FuelExhausted) and r.steps == 50


def test_generators_are_deterministic_and_checked():
    a1, a2 = gen_wellkinded_type(7, 8), gen_wellkinded_type(7, 8)
    assert a1[:3] == a2[:3]
    t1, t2 = gen_welltyped_closed_term(7), gen_welltyped_closed_term(7)
    assert t1[:2] == t2[:2]
    for seed in range(200):
        assert check(gen_wellkinded_type(seed, 8)[3])
        assert check(gen_welltyped_closed_term(seed)[2])


def test_term_generator_covers_every_constructor():
    seen = set()

    def walk(t):
        seen.add(type(t).__name__)
        for f in ("body", "fn", "arg"):
            sub = getattr(t, f, None)
            if sub is not None and type(sub).__name__.startswith("Tm"):
                walk(sub)

    for seed in range(300):
        walk(gen_welltyped_closed_term(seed, 8)[0])
    assert {"TmVar", "TmAbs", "TmApp", "TmTAbs", "TmTApp"} <= seen


@given(seeds)
def test_generated_terms_retype_to_their_type(seed):
    t, ty, d = gen_welltyped_closed_term(seed, 8)
    assert d.conclusion.term == t and d.conclusion.ty == ty
    assert type_synth_term((), t) is not None


def test_canonical_context_formation():
    ctx = (TpBind(STAR), TpBind(Intv(TpVar(0), TOP)))
    d = ctx_wf_canonical(ctx)
    assert d is not None and check(d)
    assert ctx_wf_canonical((TpBind(Intv(TpVar(3), TOP)),)) is None


def test_small_harness():
    report = safety_harness(50, 6, seed=3)
    assert report.ok and report.n == 50 and not report.violations
    assert report.steps > 0


def test_open_counterexample_breaks_preservation():
    cx = open_counterexample()
    assert check(cx.derivation)
    assert cx.violates_preservation and cx.reduct_stuck_after


@given(seeds)
def test_positive_answers_carry_valid_witnesses(seed):
    rng = random.Random(seed)
    types = closed_normal_types(4)
    u, v = rng.choice(types), rng.choice(types)
    r = subtype_fuel((), u, v, 2_000)
    if isinstance(r, Yes):
        assert check(r.witness)
        assert r.witness.conclusion.lo == u and r.witness.conclusion.hi == v
