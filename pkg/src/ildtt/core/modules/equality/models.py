from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

from pydantic import BaseModel, Field

from ildtt.core.modules.syntax.models import Term


class Verdict(StrEnum):
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"

    @classmethod
    def all_of(cls, verdicts: list[Verdict]) -> Verdict:
        """Conjunction: false dominates, then undecided."""
        if cls.FALSE in verdicts:
            return cls.FALSE
        if cls.UNDECIDED in verdicts:
            return cls.UNDECIDED
        return cls.TRUE


class EqualityMode(BaseModel):
    """Which uniqueness rules the engine applies."""

    eta_negative: bool = Field(True, description="Type-directed eta for Pi, lolli, with and top")
    ext_positive: bool = Field(False, description="Bounded U-expansion search for positive types")
    fuel: int = Field(8, ge=1, description="Expansion budget for the positive search")

    model_config = {"frozen": True}


class Rewrite(StrEnum):
    """Names of the rewrite steps recorded in equality traces."""

    UNIT_C = "I-C"
    TENSOR_C = "Tensor-C"
    LOLLI_C = "Lolli-C"
    WITH_C1 = "With-C1"
    WITH_C2 = "With-C2"
    PLUS_C1 = "Plus-C1"
    PLUS_C2 = "Plus-C2"
    BANG_C = "Bang-C"
    SIGMA_C = "Sigma-C"
    PI_C = "Pi-C"
    ID_C = "Id-C"
    TWO_C1 = "Two-C1"
    TWO_C2 = "Two-C2"
    COMMUTE = "Commute"
    ABSORB = "Abort-Absorb"
    REORDER = "Let-Reorder"
    LOLLI_ETA = "Lolli-U"
    PI_ETA = "Pi-U"
    WITH_ETA = "With-U"
    TOP_ETA = "Top-U"
    UNIT_U = "I-U"
    TENSOR_U = "Tensor-U"
    SIGMA_U = "Sigma-U"
    BANG_U = "Bang-U"
    PLUS_U = "Plus-U"
    TWO_U = "Two-U"
    ID_U = "Id-U"


@dataclass(frozen=True, slots=True)
class CanonForm:
    """Canonical representative of a term under a mode."""

    term: Term
    mode: EqualityMode
    steps: int = 0
    trace: tuple[Rewrite, ...] = field(default=(), compare=False)


@dataclass(frozen=True, slots=True)
class Outcome:
    """Result of an equality query, with the rewrite steps that led to it."""

    verdict: Verdict
    trace: tuple[Rewrite, ...] = ()
    fuel_used: int = 0

    def rules(self) -> set[str]:
        """Equality rules a true outcome rests on.

        Both sides meet in one canonical form: reflexivity there, then symmetry and
        transitivity to join the two rewrite sequences when any step was taken.
        """
        if self.verdict is not Verdict.TRUE:
            return set()
        if not self.trace:
            return {"Tm-Eq-R"}
        return {"Tm-Eq-R", "Tm-Eq-S", "Tm-Eq-T"}
