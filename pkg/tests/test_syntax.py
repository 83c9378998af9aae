import random

from hypothesis import given, strategies as st

from fomega.engine.generate import gen_wellkinded_type
from fomega.syntax import (
    App, Arr, BOT, DArr, Intv, Lam, SArr, STAR, TOP, TmAbs, TmBind, TmVar, TpBind, TpVar, Top,
    alpha_eq, erase_kind, extend, from_spine, kind_fv, lookup_kind, lookup_type, shift_term,
    shift_type, subst, subst_kind, subst_type, subst_term, to_spine, type_fv, weak_eq,
)
from fomega.derivations.rules import STAR as STAR_KIND

from support import loosen

seeds = st.integers(min_value=0, max_value=10_000)


def sample(seed):
    return gen_wellkinded_type(seed, 8)


def test_erase_kind():
    assert erase_kind(Intv(TOP, BOT)) == STAR
    k = DArr(STAR_KIND, DArr(Intv(BOT, TpVar(0)), STAR_KIND))
    assert erase_kind(k) == SArr(STAR, SArr(STAR, STAR))


@given(seeds, seeds)
def test_erasure_is_stable_under_substitution(s1, s2):
    _, _, k, _ = sample(s1)
    _, a, _, _ = sample(s2)
    assert erase_kind(subst_kind(k, 0, a)) == erase_kind(k)


def test_spine_examples():
    x, b, c = TpVar(0), TpVar(1), TpVar(2)
    e = to_spine(App(App(x, b), c))
    assert e.head == x and e.spine == (b, c)
    assert to_spine(TOP).spine == ()


@given(seeds)
def test_spine_isomorphism(seed):
    _, a, _, _ = sample(seed)
    assert alpha_eq(from_spine(to_spine(a)), a)


def test_substitution_examples():
    assert subst_type(Arr(TpVar(0), TpVar(0)), 0, TOP) == Arr(TOP, TOP)
    # (λY:*. X)[X := Y_free] keeps the free Y distinct from the binder
    lam = Lam(STAR_KIND, TpVar(1))
    assert subst_type(lam, 0, TpVar(0)) == Lam(STAR_KIND, TpVar(1))
    assert subst_type(Lam(STAR_KIND, TpVar(0)), 0, TOP) == Lam(STAR_KIND, TpVar(0))


def test_term_substitution_and_dispatch():
    t = TmAbs(TOP, TmApp_(TmVar(1), TmVar(0)))
    assert subst_term(t, 0, TmAbs(TOP, TmVar(0))) == TmAbs(TOP, TmApp_(TmAbs(TOP, TmVar(0)), TmVar(0)))
    assert subst(TpVar(0), 0, TOP) == TOP


def TmApp_(f, x):
    from fomega.syntax import TmApp
    return TmApp(f, x)


@given(seeds, seeds, seeds)
def test_substitutions_commute(s1, s2, s3):
    # e[X:=A][Y:=B] = e[Y:=B][X:=A[Y:=B]] with X at index 0 and Y at index 1 of e's scope
    _, e, _, _ = sample(s1)
    _, a, _, _ = sample(s2)
    _, b, _, _ = sample(s3)
    left = subst_type(subst_type(e, 0, a), 0, b)
    right = subst_type(subst_type(e, 1, shift_type(b, 1)), 0, subst_type(a, 0, b))
    assert left == right


@given(seeds)
def test_shift_inverse(seed):
    _, a, _, _ = sample(seed)
    assert shift_type(shift_type(a, 2), -2) == a
    assert subst_type(shift_type(a, 1), 0, TOP) == a
    assert 0 not in type_fv(shift_type(a, 1))


def test_alpha_eq():
    assert alpha_eq(Lam(STAR_KIND, TpVar(0)), Lam(STAR_KIND, TpVar(0)))
    assert not alpha_eq(Lam(STAR_KIND, TOP), Lam(Intv(TOP, TOP), TOP))


def test_weak_eq_examples():
    b = TpVar(3)
    assert weak_eq(Lam(Intv(BOT, b), TpVar(0)), Lam(Intv(b, TOP), TpVar(0)))
    assert not weak_eq(Lam(STAR_KIND, TpVar(0)), Lam(DArr(STAR_KIND, STAR_KIND), TpVar(0)))
    assert not weak_eq(TOP, BOT)


@given(seeds, st.integers(0, 100))
def test_weak_eq_is_an_equivalence_and_preserves_shapes(seed, salt):
    _, a, k, _ = sample(seed)
    rng = random.Random(salt)
    b, c = loosen(a, rng), loosen(a, rng)
    assert weak_eq(a, a)
    assert weak_eq(a, b) and weak_eq(b, a)
    assert weak_eq(a, c) and weak_eq(b, c)
    k2 = DArr(k, STAR_KIND)
    assert weak_eq(k2, k2)


@given(seeds, st.integers(0, 100))
def test_weak_eq_is_a_congruence(seed, salt):
    _, a, _, _ = sample(seed)
    b = loosen(a, random.Random(salt))
    assert weak_eq(Arr(a, TOP), Arr(b, TOP))
    assert weak_eq(App(a, a), App(b, b))
    assert weak_eq(Lam(STAR_KIND, a), Lam(Intv(TOP, TOP), b))
    assert weak_eq(Intv(a, a), Intv(b, b))


def test_context_lookup_counts_sorts_separately():
    ctx = extend(extend(extend((), TpBind(STAR_KIND)), TmBind(TpVar(0))), TpBind(Intv(TpVar(0), TOP)))
    assert lookup_kind(ctx, 0) == Intv(TpVar(1), TOP)
    assert lookup_kind(ctx, 1) == STAR_KIND
    # the term binding's type was scoped before the second type binding
    assert lookup_type(ctx, 0) == TpVar(1)
    assert lookup_kind(ctx, 2) is None


def test_free_variables():
    assert type_fv(Lam(STAR_KIND, App(TpVar(0), TpVar(2)))) == frozenset({1})
    assert kind_fv(DArr(STAR_KIND, Intv(TpVar(0), TpVar(1)))) == frozenset({0})
    assert isinstance(shift_term(TmVar(0), 1, 0), TmVar)
    assert Top() == TOP
