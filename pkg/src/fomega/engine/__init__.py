"""Algorithmic fragments: canonical search, top-level subtyping, term typing,
evaluation and random generation."""

from .trivalent import No, Trivalent, Unknown, Yes
from .canonical import (
    DEFAULT_FUEL, kind_check_fuel, kind_synth, kind_synth_derivation, subkind_fuel,
    subtype_fuel,
)
from .toplevel import TfResult, tf_subtype
from .terms import Stuck, Typed, Value, cbv_eval, type_synth_term
from .generate import gen_wellkinded_type, gen_welltyped_closed_term
from .harness import SafetyReport, open_counterexample, safety_harness

__all__ = [
    "Yes", "No", "Unknown", "Trivalent", "DEFAULT_FUEL", "kind_synth", "kind_synth_derivation",
    "subtype_fuel", "subkind_fuel", "kind_check_fuel", "TfResult", "tf_subtype", "Typed",
    "type_synth_term", "Value", "Stuck", "cbv_eval", "gen_wellkinded_type",
    "gen_welltyped_closed_term", "SafetyReport", "safety_harness", "open_counterexample",
]
