from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

from pydantic import BaseModel, Field

from ildtt.core.modules.checker.models import DeclVerdict
from ildtt.core.modules.model.models import OracleResult, OracleStatus
from ildtt.core.modules.surface.models import ModeSpec


class Expectation(StrEnum):
    OK = "ok"
    TYPE_ERROR = "type-error"
    EQ_TRUE = "eq-true"
    EQ_FALSE = "eq-false"
    UNDECIDED_FORBIDDEN = "undecided-forbidden"

    def admits(self, verdict: DeclVerdict) -> bool:
        match self:
            case Expectation.OK:
                return verdict is DeclVerdict.OK
            case Expectation.TYPE_ERROR:
                return verdict is DeclVerdict.ERROR
            case Expectation.EQ_TRUE:
                return verdict is DeclVerdict.TRUE
            case Expectation.EQ_FALSE:
                return verdict is DeclVerdict.FALSE
            case Expectation.UNDECIDED_FORBIDDEN:
                return verdict in (DeclVerdict.TRUE, DeclVerdict.FALSE)


@dataclass(frozen=True, slots=True)
class ManifestEntry:
    """One manifest line: `file ▸ name ▸ verdict[:rule] ▸ mode`."""

    file: str
    name: str
    expected: Expectation
    rule: str | None
    mode: ModeSpec
    line: int
    covers: str = ""


@dataclass(frozen=True, slots=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]

    def files(self) -> list[str]:
        return sorted({entry.file for entry in self.entries})

    def for_file(self, file: str) -> list[ManifestEntry]:
        return [entry for entry in self.entries if entry.file == file]


class EntryResult(BaseModel):
    file: str = Field(..., description="Corpus file, relative to the corpus directory")
    name: str = Field(..., description="Declaration name")
    expected: str = Field(..., description="Verdict written in the manifest")
    actual: str = Field(..., description="Verdict the kernel produced")
    passed: bool = Field(..., description="Whether the two agree")
    note: str = Field("", description="Why the entry failed")
    covers: str = Field("", description="Theorem or rule the entry transcribes")


class CorpusReport(BaseModel):
    entries: list[EntryResult] = Field(default_factory=list)
    unlisted: list[str] = Field(default_factory=list, description="Files or declarations the manifest omits")
    rules_covered: list[str] = Field(default_factory=list, description="Rules used by accepted derivations")
    rules_missing: list[str] = Field(default_factory=list, description="Rules no accepted derivation uses")
    rules_rejected: list[str] = Field(default_factory=list, description="Rules named by expected rejections")
    oracle: list[OracleResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(entry.passed for entry in self.entries) and not self.unlisted and not self.oracle_failures()

    def failures(self) -> list[EntryResult]:
        return [entry for entry in self.entries if not entry.passed]

    def oracle_failures(self) -> list[OracleResult]:
        return [result for result in self.oracle if not result.status.passed]

    def oracle_outside(self) -> list[OracleResult]:
        """Checks counted as passing although the model could not confirm them."""
        return [result for result in self.oracle if result.status is OracleStatus.OUTSIDE]
