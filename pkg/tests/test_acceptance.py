"""Acceptance criteria, one test per criterion.

Each check returns ``(ok, detail)``; the outcome is recorded in ``RESULTS`` and
printed as one PASS/FAIL line per criterion at the end of the pytest run.
Running this file directly prints the same lines without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import admissible_battery, kind_instance, loosen, nested_instance, subst_instance  # noqa: E402

from fomega.derivations import Mode, check  # noqa: E402
from fomega.derivations import rules as R  # noqa: E402
from fomega.engine import Unknown, Yes, kind_check_fuel, subkind_fuel, subtype_fuel, tf_subtype  # noqa: E402
from fomega.engine.brute import closed_normal_types, provable  # noqa: E402
from fomega.engine.generate import gen_wellkinded_type  # noqa: E402
from fomega.engine.harness import open_counterexample, safety_harness  # noqa: E402
from fomega.hereditary import hsubst, hsubst_kind, hsubst_spine, hsubst_vs_subst_check, rapp  # noqa: E402
from fomega.normalizer import eta_strip, nf_ctx, nf_kind, nf_type  # noqa: E402
from fomega.reduction import FuelExhausted, beta_reduce  # noqa: E402
from fomega.simple import shape_context, simple_check, simple_kind_synth  # noqa: E402
from fomega import sk  # noqa: E402
from fomega.syntax import (  # noqa: E402
    All, App, Arr, Bot, Lam, SArr, TOP, TpBind, TpVar, Top, alpha_eq, erase_kind,
    extend, kind_depth, shift_type, subst_kind, to_spine, weak_eq,
)
from fomega.cli.drv import read_derivation  # noqa: E402
from fomega.cli.surface import parse_type, scope_of_names  # noqa: E402

RESULTS: dict[int, tuple[str, bool, str]] = {}

TITLES = {
    1: "nf output is simply kinded at the erased kind",
    2: "eta-stripped nf agrees with leftmost-outermost beta",
    3: "golden normal forms (Bounded, Omega)",
    4: "hereditary substitution laws and the ill-kinded counterexample",
    5: "weak commutation of nf and substitution",
    6: "admissible constructors pass the checker",
    7: "canonical kind checking completes declarative kinding",
    8: "top-level subtyping: inversion clauses and brute force",
    9: "type safety harness and the open-term counterexample",
    10: "SK traces yield checked subtyping derivations",
}


def record(n: int, ok: bool, detail: str) -> tuple[bool, str]:
    RESULTS[n] = (TITLES[n], ok, detail)
    return ok, detail


def summary_lines() -> list[str]:
    return [f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
            for n, (title, ok, detail) in sorted(RESULTS.items())]


# ---------------------------------------------------------------- 1 and 2


def criterion_1() -> tuple[bool, str]:
    t0 = time.perf_counter()
    bad = []
    for seed in range(1000):
        ctx, a, k, _ = gen_wellkinded_type(seed, 10)
        v = nf_type(ctx, a)
        if not simple_check(shape_context(nf_ctx(ctx)), v, erase_kind(k)):
            bad.append(seed)
    secs = time.perf_counter() - t0
    return record(1, not bad and secs <= 60, f"1000 types, {len(bad)} failures, {secs:.1f}s")


def criterion_2() -> tuple[bool, str]:
    bad, inconclusive = [], 0
    for seed in range(1000):
        ctx, a, _, _ = gen_wellkinded_type(seed, 10)
        beta = beta_reduce(a, 10_000)
        if isinstance(beta, FuelExhausted):
            inconclusive += 1
            continue
        if not alpha_eq(eta_strip(nf_type(ctx, a)), beta[0]):
            bad.append(seed)
    ok = not bad and inconclusive <= 10
    return record(2, ok, f"1000 types, {len(bad)} mismatches, {inconclusive} inconclusive")


# ---------------------------------------------------------------- 3

BOUNDED = "lam B : *. lam F : (X <= B : *) -> *. all X <= B : *. F X"
OMEGA = "(lam X : *. X X) (lam X : *. X X)"


def criterion_3() -> tuple[bool, str]:
    empty = scope_of_names([])
    applied = parse_type(f"({BOUNDED}) Top (lam X : *. X -> X)", empty)
    expected = All(R.STAR, Arr(TpVar(0), TpVar(0)))
    omega = parse_type(OMEGA, empty)
    self_app = Lam(R.STAR, App(TpVar(0), TpVar(0)))
    got_bounded = nf_type((), applied)
    got_omega = nf_type((), omega)
    ok = (alpha_eq(got_bounded, expected) and omega == App(self_app, self_app)
          and alpha_eq(got_omega, omega))
    return record(3, ok, "Bounded Top (lam X:*. X -> X) and Omega")


# ---------------------------------------------------------------- 4


def _operator_spines(a, depth: int = 0):
    """(spine, depth) for every application subterm whose head is the variable at ``depth``."""
    e = to_spine(a)
    if e.spine and e.head == TpVar(depth):
        yield e.spine, depth
    for d in e.spine:
        yield from _operator_spines(d, depth)
    match e.head:
        case Arr(d, c):
            yield from _operator_spines(d, depth)
            yield from _operator_spines(c, depth)
        case All(_, b) | Lam(_, b):
            yield from _operator_spines(b, depth + 1)


def hsubst_law_counts(n: int = 1000) -> Counter:
    c: Counter = Counter()
    rng = random.Random(4)
    for seed in range(n):
        i = subst_instance(seed)
        j = i.shape
        gamma = shape_context(i.nctx)
        out = hsubst(i.e, 0, j, i.v)

        # shape stability, on the kind of the target and on the result
        if erase_kind(hsubst_kind(i.k, 0, j, i.v)) != erase_kind(i.k):
            c["stability"] += 1
        if simple_kind_synth(gamma, out) != erase_kind(i.k):
            c["stability"] += 1
        oracle = hsubst_vs_subst_check(i.e, 0, i.j, i.v)
        if oracle is None:
            c["oracle inconclusive"] += 1
        elif not oracle:
            c["stability"] += 1

        # spine concatenation, on spines split at every point
        for spine, depth in _operator_spines(i.e):
            v = shift_type(i.v, depth)
            for cut in range(len(spine) + 1):
                whole = hsubst_spine(spine, depth, j, v)
                if whole != hsubst_spine(spine[:cut], depth, j, v) + hsubst_spine(spine[cut:], depth, j, v):
                    c["concat"] += 1
            c["concat spines"] += 1

        # weak-equality congruence for hsubst on types and kinds, and for rapp
        e2, v2 = loosen(i.e, rng), loosen(i.v, rng)
        if not weak_eq(out, hsubst(e2, 0, j, v2)):
            c["congruence"] += 1
        if not weak_eq(hsubst_kind(i.k, 0, j, i.v), hsubst_kind(i.k, 0, j, v2)):
            c["congruence"] += 1
        if isinstance(j, SArr):
            arg = TOP if j.dom == STAR_SHAPE else i.v
            if not weak_eq(rapp(i.v, j, arg), rapp(v2, j, loosen(arg, rng))):
                c["congruence"] += 1

        # commutativity of nested substitutions
        m = nested_instance(seed)
        jj, ll = erase_kind(m.j), erase_kind(m.l)
        left = hsubst(hsubst(m.e, 0, ll, m.w), 0, jj, m.v)
        right = hsubst(hsubst(m.e, 1, jj, shift_type(m.v, 1)), 0, ll, hsubst(m.w, 0, jj, m.v))
        if left != right:
            c["commute"] += 1
    return c


STAR_SHAPE = erase_kind(R.STAR)


def ill_kinded_counterexample() -> tuple:
    """Context Y : * -> *, X : *; target X Top; substitute X := Y, then Y := lam Z:*. Z."""
    target = App(TpVar(0), TOP)
    b = Lam(R.STAR, TpVar(0))
    arrow = SArr(STAR_SHAPE, STAR_SHAPE)
    left = hsubst(hsubst(target, 0, STAR_SHAPE, TpVar(0)), 0, arrow, b)
    right = hsubst(hsubst(target, 1, arrow, b), 0, STAR_SHAPE, hsubst(TpVar(0), 0, arrow, b))
    return left, right


def criterion_4() -> tuple[bool, str]:
    c = hsubst_law_counts(1000)
    left, right = ill_kinded_counterexample()
    reproduced = left == Top() and right == App(Lam(R.STAR, TpVar(0)), TOP) and left != right
    failures = c["stability"] + c["concat"] + c["congruence"] + c["commute"]
    ok = failures == 0 and reproduced and c["oracle inconclusive"] == 0
    detail = (f"1000 instances per law, {failures} failures, {c['concat spines']} spines, "
              f"counterexample {'reproduced' if reproduced else 'NOT reproduced'}")
    return record(4, ok, detail)


# ---------------------------------------------------------------- 5


def criterion_5() -> tuple[bool, str]:
    bad = []
    for seed in range(500):
        ctx, a, j, k = kind_instance(seed)
        g = nf_ctx(ctx)
        lhs = nf_kind(g, subst_kind(k, 0, a))
        rhs = hsubst_kind(nf_kind(nf_ctx(extend(ctx, TpBind(j))), k), 0, erase_kind(j), nf_type(g, a))
        if not weak_eq(lhs, rhs):
            bad.append(seed)
    return record(5, not bad, f"500 pairs, {len(bad)} failures")


# ---------------------------------------------------------------- 6


def criterion_6() -> tuple[bool, str]:
    runs: Counter = Counter()
    bad: Counter = Counter()
    for seed in range(300):
        _, _, k, d = gen_wellkinded_type(seed, 6, max_kind_depth=3)
        assert kind_depth(k) <= 3
        for name, out in admissible_battery(d).items():
            runs[name] += 1
            if not check(out, Mode.ORIGINAL):
                bad[name] += 1
    total = sum(bad.values())
    return record(6, total == 0, f"{len(runs)} constructors, {sum(runs.values())} derivations, {total} rejected")


# ---------------------------------------------------------------- 7


def criterion_7() -> tuple[bool, str]:
    c: Counter = Counter()
    for seed in range(500):
        ctx, a, k, _ = gen_wellkinded_type(seed)
        g = nf_ctx(ctx)
        r = kind_check_fuel(g, nf_type(ctx, a), nf_kind(ctx, k), 10_000)
        if isinstance(r, Yes) and not check(r.witness):
            c["bad witness"] += 1
        c[type(r).__name__] += 1
    ok = c["No"] == 0 and c["bad witness"] == 0 and c["Unknown"] <= 10
    return record(7, ok, f"500 derivations: {c['Yes']} Yes, {c['Unknown']} Unknown, {c['No']} No")


# ---------------------------------------------------------------- 8


def inversion_failures(types) -> list:
    """Check the inversion clauses on every pair; returns the offending pairs."""
    bad = []
    for u in types:
        for v in types:
            r = tf_subtype(u, v)
            if r.holds and not check(r.witness):
                bad.append((u, v, "witness"))
            if isinstance(u, Top) and isinstance(v, Bot) and r.holds:
                bad.append((u, v, "Top <= Bot"))
            if isinstance(u, Arr) and isinstance(v, All) and r.holds:
                bad.append((u, v, "arrow <= all"))
            if isinstance(u, All) and isinstance(v, Arr) and r.holds:
                bad.append((u, v, "all <= arrow"))
            if not r.holds:
                continue
            if isinstance(u, Arr) and isinstance(v, Arr):
                if not (tf_subtype(v.dom, u.dom).holds and tf_subtype(u.cod, v.cod).holds):
                    bad.append((u, v, "arrow inversion"))
            if isinstance(u, All) and isinstance(v, All):
                sk_ok = isinstance(subkind_fuel((), v.kind, u.kind), Yes)
                body_ok = isinstance(subtype_fuel((TpBind(v.kind),), u.body, v.body), Yes)
                if not (sk_ok and body_ok):
                    bad.append((u, v, "all inversion"))
    return bad


def criterion_8() -> tuple[bool, str]:
    types = closed_normal_types(5)
    mismatches = [(u, v) for u in types for v in types
                  if provable((), u, v, 4) != tf_subtype(u, v).holds]
    inversion = inversion_failures(types)
    ok = not mismatches and not inversion
    return record(8, ok, f"{len(types)} types, {len(types) ** 2} pairs, {len(mismatches)} brute-force "
                         f"mismatches, {len(inversion)} inversion failures")


# ---------------------------------------------------------------- 9


def criterion_9() -> tuple[bool, str]:
    t0 = time.perf_counter()
    report = safety_harness(1000, 8)
    secs = time.perf_counter() - t0
    cx = open_counterexample()
    confirmed = bool(check(cx.derivation)) and cx.violates_preservation and cx.reduct_stuck_after
    ok = report.ok and confirmed and secs <= 120
    return record(9, ok, f"{report.summary()}, {secs:.1f}s, open counterexample "
                         f"{'confirmed' if confirmed else 'NOT confirmed'}")


# ---------------------------------------------------------------- 10

REDISCOVERY_FUEL = (100_000, 1_000_000)
GOLDEN_DETOUR = Path(__file__).parent.parent / "examples" / "sk_top_detour.drv"


def _passes_top(d) -> bool:
    seen, stack = set(), [d]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if TOP in (getattr(node.conclusion, "lo", None), getattr(node.conclusion, "hi", None)):
            return True
        stack.extend(node.premises)
    return False


def detour_checks(d) -> bool:
    """S <= S through Top, accepted by the checker."""
    s = sk.encode_sk(sk.S_)
    c = d.conclusion
    return bool(check(d)) and c.lo == s and c.hi == s and _passes_top(d)


def criterion_10() -> tuple[bool, str]:
    gamma = sk.gamma_sk()
    rng = random.Random(0)
    c: Counter = Counter()
    for _ in range(200):
        s, trace, t = sk.random_trace(rng, rng.randint(1, 6), rng.randint(0, 8))
        if not check(sk.derive_subtyping(s, t, trace)):
            c["rejected"] += 1
        if len(trace.steps) > 3:
            continue
        for fuel in REDISCOVERY_FUEL:
            r = subtype_fuel(gamma, sk.encode_sk(s), sk.encode_sk(t), fuel)
            if not isinstance(r, Unknown):
                break
        c[f"rediscovery {type(r).__name__}"] += 1
        if isinstance(r, Yes) and not check(r.witness):
            c["rejected"] += 1
    detour_ok = all(map(detour_checks, (sk.top_detour(), read_derivation(GOLDEN_DETOUR.read_text()))))
    probe = sk.confluence_probe(sk.S_, sk.S_)
    probe_ok = isinstance(probe, sk.Confirmed)
    fails = c["rejected"] + c["rediscovery No"] + c["rediscovery Unknown"]
    ok = fails == 0 and detour_ok and probe_ok
    return record(10, ok, f"200 traces, {c['rediscovery Yes']} rediscovered, {fails} failures, "
                          f"detour {'checks' if detour_ok else 'FAILS'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    ok, detail = criterion()
    assert ok, detail


if __name__ == "__main__":
    for crit in CRITERIA:
        crit()
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for _, ok, _ in RESULTS.values()) else 1)
