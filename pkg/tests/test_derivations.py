import dataclasses

import pytest
from hypothesis import given, strategies as st

from fomega.derivations import admissible as A
from fomega.derivations import rules as R
from fomega.derivations.check import Mode, Ok, RuleError, check, drop_validity_conditions
from fomega.derivations.judgments import Derivation, Kinding, PreconditionError, Subtype
from fomega.derivations.search import ctx_wf
from fomega.derivations.soundness import declarative_kinding, declarative_subtype
from fomega.derivations.transform import narrow_context, weaken1
from fomega.derivations.validity import to_star, wf_star
from fomega.engine import Yes, kind_check_fuel, subtype_fuel
from fomega.engine.generate import gen_wellkinded_type
from fomega.normalizer import nf_ctx, nf_kind, nf_type
from fomega.syntax import BOT, DArr, Intv, TOP, TpBind, TpVar

seeds = st.integers(min_value=0, max_value=10_000)
OP = DArr(R.STAR, R.STAR)


def var_in_interval():
    """B:*, C:*, A : B..C ⊢ A : B..C"""
    cw = ctx_wf((TpBind(R.STAR), TpBind(R.STAR), TpBind(Intv(TpVar(1), TpVar(0)))))
    return R.k_var(cw, 0)


def test_widening_an_interval_to_star():
    d = var_in_interval()
    sing = R.k_sing(d)
    widen = R.sk_intv(R.st_bot(d), R.st_top(d))
    out = R.k_sub(sing, widen)
    assert out.conclusion.kind == R.STAR
    assert out.rules_used() >= {"K-Sing", "ST-Bot", "ST-Top", "SK-Intv", "K-Sub"}
    assert check(out) == Ok()
    assert check(out, Mode.EXTENDED)


def test_trans_with_mismatched_middle_is_rejected():
    d = var_in_interval()
    up, down = R.st_top(d), R.st_bot(d)
    c = Subtype(up.conclusion.ctx, up.conclusion.lo, TOP, R.STAR)
    bad = Derivation("ST-Trans", c, (up, down))
    err = check(bad)
    assert isinstance(err, RuleError) and err.rule == "ST-Trans" and err.path == ()
    with pytest.raises(PreconditionError):
        R.st_trans(up, down)


def test_variable_with_wrong_kind_is_rejected():
    d = var_in_interval()
    bad = Derivation("K-Var", Kinding(d.conclusion.ctx, TpVar(0), R.STAR), d.premises, d.side)
    assert isinstance(check(bad), RuleError)
    nested = R.st_refl(bad)
    err = check(nested)
    assert err.path == (0,) and err.rule == "K-Var"


def test_unknown_rule_and_premise_count():
    d = var_in_interval()
    assert not check(Derivation("K-Nope", d.conclusion, d.premises))
    assert not check(Derivation("K-Sing", R.k_sing(d).conclusion, ()))


def test_gray_premises():
    cw = ctx_wf(())
    top = R.k_top(cw)
    lam = R.k_abs(wf_star(cw), R.k_top(R.c_tpbind(cw, wf_star(cw))))
    plain = R.k_app(lam, top)
    assert check(plain)
    assert not check(plain, Mode.EXTENDED)


@given(seeds)
def test_dropping_validity_conditions_keeps_original_acceptance(seed):
    _, _, _, d = gen_wellkinded_type(seed, 8)
    assert check(d)
    assert check(drop_validity_conditions(d))
    if check(d, Mode.EXTENDED):
        assert check(drop_validity_conditions(d), Mode.ORIGINAL)


def test_named_admissible_shapes():
    d = var_in_interval()
    star_d = to_star(d)
    assert A.k_ho_sing(star_d).rule == "K-Sing"
    # an operator variable F : * -> * bound to its own singleton
    cw = ctx_wf((TpBind(OP),))
    f = R.k_var(cw, 0)
    sing_wf = A.wf_ho_intv(f, f)
    g = R.k_var(R.c_tpbind(cw, sing_wf), 0)
    from support import sing_le
    g_at_op = R.k_sub(g, weaken1(sing_le(f), sing_wf))
    proof = A.st_ho_bnd1(g_at_op, weaken1(f, sing_wf), g)
    assert check(proof)
    assert {"ST-Eta1", "ST-Eta2", "ST-Abs"} <= proof.rules_used()


def test_trans_subkind_at_arrow_kind():
    cw = ctx_wf(())
    kd = R.wf_darr(wf_star(cw), wf_star(R.c_tpbind(cw, wf_star(cw))))
    refl = A.refl_subkind(kd)
    wide = A.sk_kmax(kd)
    out = A.trans_subkind(refl, wide)
    assert check(out)
    assert out.conclusion.lo == OP


def test_narrowing():
    # X:* ⊢ X : * narrowed to X:(Bot..Top) at position 0 with an explicit bound
    cw0 = ctx_wf(())
    top = R.k_top(cw0)
    evidence = R.sk_intv(R.st_refl(R.k_bot(cw0)), R.st_refl(top))
    bound_kd = R.wf_intv(R.k_bot(cw0), top)
    cw = R.c_tpbind(cw0, wf_star(cw0))
    d = R.k_var(cw, 0)
    out = narrow_context(d, 0, evidence, bound_kd)
    assert check(out)
    assert out.conclusion.ctx == (TpBind(Intv(BOT, TOP)),)


def test_narrowing_with_reflexive_evidence_keeps_the_conclusion():
    prefix = ctx_wf((TpBind(R.STAR), TpBind(R.STAR)))
    bound = R.wf_intv(R.k_var(prefix, 1), R.k_var(prefix, 0))
    cw = R.c_tpbind(prefix, bound)
    cw = R.c_tpbind(cw, wf_star(cw))
    inner = R.k_var(cw, 1)
    out = narrow_context(inner, 2, A.refl_subkind(bound))
    assert out.conclusion == inner.conclusion and check(out)


def test_weakening_then_narrowing():
    cw0 = ctx_wf(())
    d = R.k_top(R.c_tpbind(cw0, wf_star(cw0)))
    w = weaken1(d, wf_star(ctx_wf(d.conclusion.ctx)))
    assert check(w) and len(w.conclusion.ctx) == 2
    bound = R.wf_intv(R.k_bot(cw0), R.k_bot(cw0))
    sub = R.sk_intv(R.st_refl(R.k_bot(cw0)), R.st_bot(R.k_top(cw0)))
    out = narrow_context(w, 0, sub, bound)
    assert check(out) and out.conclusion.ctx[0] == TpBind(Intv(BOT, BOT))


def test_canonical_witnesses_translate_to_declarative_derivations():
    ctx = (TpBind(Intv(TOP, BOT)),)
    r = subtype_fuel(ctx, TOP, BOT, 100)
    assert isinstance(r, Yes) and check(r.witness)
    d = declarative_subtype(r.witness)
    assert check(d) and d.conclusion == Subtype(ctx, TOP, BOT, R.STAR)


@given(seeds)
def test_canonical_kinding_translates(seed):
    ctx, a, k, _ = gen_wellkinded_type(seed, 6)
    nctx = nf_ctx(ctx)
    r = kind_check_fuel(nctx, nf_type(ctx, a), nf_kind(ctx, k), 10_000)
    if isinstance(r, Yes):
        d = declarative_kinding(r.witness)
        assert check(d)
        assert d.conclusion.ty == nf_type(ctx, a)


def test_derivation_counts_shared_nodes_once():
    d = var_in_interval()
    twice = R.st_trans(R.st_refl(d), R.st_refl(d))
    assert twice.size() < 2 * R.st_refl(d).size() + 1
    assert dataclasses.replace(d).conclusion == d.conclusion
