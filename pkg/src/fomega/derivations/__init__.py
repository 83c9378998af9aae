"""Derivation trees for the declarative and canonical systems, with a checker
and constructors for every primitive and admissible rule."""

from .judgments import *  # noqa: F401,F403
from .judgments import Derivation, PreconditionError
from .check import Mode, Ok, RuleError, RULES, check, checks, drop_validity_conditions
from . import rules, admissible, transform, validity

__all__ = [
    "Derivation", "PreconditionError", "Mode", "Ok", "RuleError", "RULES", "check", "checks",
    "drop_validity_conditions", "rules", "admissible", "transform", "validity",
]
