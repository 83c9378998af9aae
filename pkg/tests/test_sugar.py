from hypothesis import given, strategies as st

from fomega.cli.surface import parse_type, scope_of_names
from fomega.engine.generate import gen_wellkinded_type
from fomega.sugar import (
    bounded_all, bounded_darr, bounded_lam, bounded_tabs, empty_kind, ho_interval, kmax, star,
    tmax, tmin, weak_eta,
)
from fomega.syntax import (
    All, App, BOT, DArr, Intv, Lam, STAR, TOP, TmTAbs, TmVar, TpVar, erase_kind, kind_fv,
    type_fv,
)

seeds = st.integers(min_value=0, max_value=10_000)
ARROW = DArr(star(), star())


def test_constants():
    assert star() == Intv(BOT, TOP)
    assert empty_kind() == Intv(TOP, BOT)
    assert erase_kind(star()) == STAR


def test_ho_interval():
    a, b = TpVar(0), TpVar(1)
    assert ho_interval(a, Intv(TOP, TOP), b) == Intv(a, b)
    assert ho_interval(a, ARROW, b) == DArr(star(), Intv(App(TpVar(1), TpVar(0)), App(TpVar(2), TpVar(0))))


def test_extrema():
    assert kmax(Intv(TpVar(0), TpVar(1))) == star()
    assert tmax(ARROW) == Lam(star(), TOP)
    assert tmin(Intv(TOP, TOP)) == BOT
    assert weak_eta(ARROW, TpVar(3)) == Lam(star(), App(TpVar(4), TpVar(0)))


def test_bounded_binders():
    a = TpVar(0)
    assert bounded_all(a, star(), TpVar(0)) == All(Intv(BOT, a), TpVar(0))
    assert bounded_darr(a, star(), star()) == DArr(Intv(BOT, a), star())
    assert bounded_lam(a, star(), TOP) == Lam(Intv(BOT, a), TOP)
    assert bounded_tabs(a, star(), TmVar(0)) == TmTAbs(Intv(BOT, a), TmVar(0))


def test_bounded_binder_in_surface_syntax():
    sc = scope_of_names([("B", "type")])
    assert parse_type("all X <= B : *. X", sc) == bounded_all(TpVar(0), star(), TpVar(0))
    op = parse_type("lam F <= (lam X : *. Top) : * -> *. F", sc)
    assert op.kind == ho_interval(tmin(ARROW), ARROW, Lam(star(), TOP))


@given(seeds)
def test_shapes_of_encodings(seed):
    _, a, k, _ = gen_wellkinded_type(seed, 8)
    assert erase_kind(ho_interval(a, k, a)) == erase_kind(k)
    assert erase_kind(kmax(k)) == erase_kind(k)
    assert ho_interval(a, kmax(k), a) == ho_interval(a, k, a)


@given(seeds)
def test_extrema_of_closed_kinds_are_closed(seed):
    _, _, k, _ = gen_wellkinded_type(seed, 8)
    if not kind_fv(k):
        assert not type_fv(tmax(k)) and not type_fv(tmin(k))
