"""Three-valued answers for searches that may run out of fuel."""

from __future__ import annotations

from dataclasses import dataclass

from ..derivations.judgments import Derivation


@dataclass(frozen=True, eq=False)
class Yes:
    witness: Derivation
    fuel_spent: int = 0

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class No:
    fuel_spent: int = 0

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Unknown:
    fuel_spent: int = 0

    def __bool__(self) -> bool:
        return False


Trivalent = Yes | No | Unknown

__all__ = ["Yes", "No", "Unknown", "Trivalent"]
