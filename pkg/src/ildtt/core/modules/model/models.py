from __future__ import annotations

from enum import StrEnum

from pydantic import BaseModel, Field


class BackendName(StrEnum):
    PSET = "pset"
    GF2 = "gf2"


# Size of a base type family member when a model leaves it out and defaults are allowed.
DEFAULT_SIZES = {BackendName.PSET: 3, BackendName.GF2: 2}


class FamilyEntry(BaseModel):
    """One member of a family: `codes` are the shown points of the parameters, `None` matches any."""

    codes: tuple[str, ...] | None = Field(None, description="Parameter points, or None for the wildcard entry")
    value: str = Field(..., description="Size of a base type, or the element a constant denotes")

    model_config = {"frozen": True}


class ModelConfig(BaseModel):
    """Interpretation of a signature's base types and constants in one backend."""

    backend: BackendName | None = Field(None, description="Backend the model is written for")
    types: dict[str, list[FamilyEntry]] = Field(default_factory=dict, description="Base type families")
    consts: dict[str, list[FamilyEntry]] = Field(default_factory=dict, description="Constant families")

    def lookup(self, table: dict[str, list[FamilyEntry]], name: str, codes: tuple[str, ...]) -> str | None:
        entries = table.get(name, [])
        for entry in entries:
            if entry.codes == codes:
                return entry.value
        return next((entry.value for entry in entries if entry.codes is None), None)

    def type_size(self, name: str, codes: tuple[str, ...]) -> str | None:
        return self.lookup(self.types, name, codes)

    def const_value(self, name: str, codes: tuple[str, ...]) -> str | None:
        return self.lookup(self.consts, name, codes)


class MorphismSummary(BaseModel):
    """A definition's denotation at one point of its intuitionistic context."""

    name: str = Field(..., description="Definition name")
    point: str = Field(..., description="Point of the intuitionistic context, shown per variable")
    dom: int = Field(..., description="Size of the tensor of the linear context")
    cod: int = Field(..., description="Size of the result object")
    table: list[str] = Field(default_factory=list, description="Image of each generator of the domain")


class BangLaw(BaseModel):
    """Size of `!A` against the closed formula for the backend, at one point."""

    ty: str = Field(..., description="The type under the bang")
    point: str = Field(..., description="Point of the intuitionistic context")
    size: int = Field(..., description="Size of the type under the bang")
    bang_size: int = Field(..., description="Size of the banged type")
    expected: int = Field(..., description="Size the backend's formula predicts")

    @property
    def holds(self) -> bool:
        return self.bang_size == self.expected


class OracleStatus(StrEnum):
    AGREES = "agrees"
    DIFFERS = "differs"
    FAILED = "failed"
    OUTSIDE = "outside"

    @property
    def passed(self) -> bool:
        return self in (OracleStatus.AGREES, OracleStatus.OUTSIDE)


class OracleResult(BaseModel):
    """Denotational verdict for an equation or isomorphism the equality engine decided.

    `outside` marks an equation the model is known not to validate, or one too large to
    enumerate under the caps; the note always names which.
    """

    name: str = Field(..., description="Directive name")
    backend: BackendName = Field(..., description="Backend the check ran in")
    status: OracleStatus = Field(..., description="Outcome of the denotational check")
    note: str = Field("", description="Reason a check failed or fell outside the model")


class EvalReport(BaseModel):
    path: str | None = Field(None, description="Source file")
    backend: BackendName = Field(..., description="Backend used")
    morphisms: list[MorphismSummary] = Field(default_factory=list)
    bang_laws: list[BangLaw] = Field(default_factory=list)
    oracle: list[OracleResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(law.holds for law in self.bang_laws) and all(r.status.passed for r in self.oracle)
