from enum import StrEnum

from pydantic import BaseModel, Field


class Severity(StrEnum):
    ERROR = "error"
    WARNING = "warning"


class Diagnostic(BaseModel):
    """A located message about a declaration."""

    severity: Severity = Field(Severity.ERROR, description="How serious the problem is")
    line: int = Field(1, ge=1, description="1-based line of the offending source")
    column: int = Field(1, ge=1, description="1-based column of the offending source")
    message: str = Field(..., description="Human-readable description")
    rule: str | None = Field(None, description="Inference rule being applied, when known")

    def render(self, path: str | None = None) -> str:
        where = f"{path}:{self.line}:{self.column}" if path else f"{self.line}:{self.column}"
        rule = f" [{self.rule}]" if self.rule else ""
        return f"{where}: {self.severity}{rule}: {self.message}"
