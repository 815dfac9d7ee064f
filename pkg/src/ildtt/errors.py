from __future__ import annotations

from abc import ABC

from ildtt.core.modules.surface.diagnostic import Diagnostic


class IldttError(ABC, Exception):
    """Base class for user-facing errors.

    All errors that inherit from IldttError have their messages shown to the user
    as-is, and the command line maps them to exit code 1.
    """


class NotFoundError(IldttError):
    """Raised when a declaration, file or model entry does not exist."""

    def __init__(self, message: str = "Not found") -> None:
        super().__init__(message)


class ValidationError(IldttError):
    """Raised when user input fails validation."""


class ParseError(IldttError):
    """Raised when source text does not parse; carries every diagnostic found."""

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        self.diagnostics = diagnostics
        super().__init__("\n".join(d.render() for d in diagnostics) or "Parse error")


class CheckError(IldttError):
    """Raised on the first rule failure inside a declaration."""

    def __init__(self, diagnostic: Diagnostic) -> None:
        self.diagnostic = diagnostic
        super().__init__(diagnostic.render())

    @property
    def rule(self) -> str | None:
        return self.diagnostic.rule


class ModelError(IldttError):
    """Raised when a backend lacks a structure or a model configuration is incomplete."""


class ModelLimitError(ModelError):
    """Raised when a denotation is too large to enumerate under the configured caps."""


class CorpusError(IldttError):
    """Raised when the corpus manifest is malformed or references missing files."""


class NormalizationCeilingError(RuntimeError):
    """Raised when the normalizer exceeds its step ceiling; always a kernel bug."""
