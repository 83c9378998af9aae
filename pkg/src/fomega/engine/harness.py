"""Progress and weak preservation, observed on generated closed programs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..derivations import check
from ..derivations import rules as R
from ..derivations import search as S
from ..derivations.judgments import Derivation
from ..normalizer import nf_type
from ..reduction import cbv_step, is_value
from ..syntax import (
    All, Arr, Intv, TmAbs, TmApp, TmTAbs, TmVar, TpBind, TpVar, BOT, TOP,
)
from .canonical import DEFAULT_FUEL
from .generate import gen_welltyped_closed_term
from .terms import type_synth_term
from .toplevel import tf_subtype


@dataclass(frozen=True)
class Violation:
    seed: int
    kind: str
    term: object
    detail: str = ""


@dataclass
class SafetyReport:
    n: int = 0
    steps: int = 0
    values: int = 0
    fuel_exhausted: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        return (f"programs={self.n} steps={self.steps} values={self.values} "
                f"fuel_exhausted={self.fuel_exhausted} violations={len(self.violations)}")


def preserved(ctx, new_ty, old_ty, fuel: int = DEFAULT_FUEL) -> bool:
    """The algorithmic weak-preservation test: equal types or top-level subtyping."""
    if new_ty == old_ty:
        return True
    u, v = nf_type(ctx, new_ty), nf_type(ctx, old_ty)
    return u == v or tf_subtype(u, v, fuel).holds


def run_program(seed: int, t, ty, report: SafetyReport, max_steps: int, fuel: int) -> None:
    first = type_synth_term((), t, fuel)
    if first is None or not preserved((), first.ty, ty, fuel):
        report.violations.append(Violation(seed, "typing", t, "generated term does not re-type"))
        return
    for _ in range(max_steps):
        if is_value(t):
            report.values += 1
            return
        nxt = cbv_step(t)
        if nxt is None:
            report.violations.append(Violation(seed, "progress", t, "stuck non-value"))
            return
        report.steps += 1
        typed = type_synth_term((), nxt, fuel)
        if typed is None:
            report.violations.append(Violation(seed, "preservation", nxt, "reduct does not type"))
            return
        if not preserved((), typed.ty, ty, fuel):
            report.violations.append(Violation(seed, "preservation", nxt, "reduct type not below"))
            return
        t = nxt
    report.fuel_exhausted += 1


def safety_harness(n: int = 1000, size: int = 8, fuel: int = DEFAULT_FUEL, seed: int = 0,
                   max_steps: int = 200) -> SafetyReport:
    report = SafetyReport()
    for s in range(seed, seed + n):
        t, ty, _ = gen_welltyped_closed_term(s, size, redex=True)
        report.n += 1
        run_program(s, t, ty, report, max_steps, fuel)
    return report


# ---------------------------------------------------------------- the open-term counterexample


@dataclass(frozen=True)
class OpenCounterexample:
    ctx: tuple
    term: object
    ty: object
    derivation: Derivation
    reduct: object
    reduct_typable: bool
    reduct_stuck_after: bool

    @property
    def violates_preservation(self) -> bool:
        return not self.reduct_typable


def open_counterexample() -> OpenCounterexample:
    """Γ = X : (A→A) .. (A→A→A) with A = ∀X:*. X→X types ((λx:A. x) v) v,
    whose one-step reduct v v is ill-typed and stuck."""
    a = All(Intv(BOT, TOP), Arr(TpVar(0), TpVar(0)))
    lo, hi = Arr(a, a), Arr(a, Arr(a, a))
    ctx = (TpBind(Intv(lo, hi)),)
    # types under the binding of X: A is closed, so no shifting is needed
    v = TmTAbs(Intv(BOT, TOP), TmAbs(TpVar(0), TmVar(0)))
    ident = TmAbs(a, TmVar(0))
    t = TmApp(TmApp(ident, v), v)

    cw = S.ctx_wf(ctx)
    da = S.synth_star(cw, a)
    d_ident = R.t_abs(da, da, R.t_var(R.c_tmbind(cw, da), 0))
    dx = R.k_var(cw, 0)
    reflect = R.st_trans(R.st_bnd1(dx), R.st_bnd2(dx))
    d_wide = R.t_sub(d_ident, reflect)
    d_v = type_synth_term(ctx, v).derivation
    d_t = R.t_app(R.t_app(d_wide, d_v), d_v)
    assert check(d_t)

    reduct = cbv_step(t)
    typed = type_synth_term(ctx, reduct)
    after = cbv_step(reduct)
    return OpenCounterexample(ctx, t, d_t.conclusion.ty, d_t, reduct, typed is not None,
                              after is None and not is_value(reduct))


__all__ = ["Violation", "SafetyReport", "preserved", "safety_harness", "open_counterexample",
           "OpenCounterexample"]
