from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

from ildtt.core.modules.surface.diagnostic import Diagnostic as Diagnostic
from ildtt.core.modules.surface.diagnostic import Severity as Severity
from ildtt.core.modules.syntax.context import DualContext
from ildtt.core.modules.syntax.models import Term, Ty


@dataclass(frozen=True, slots=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True, slots=True)
class ModeSpec:
    """Equality mode written on a directive; unset fields fall back to configuration."""

    eta: bool | None = None
    ext: bool | None = None
    fuel: int | None = None


@dataclass(frozen=True, slots=True)
class TypeDeclaration:
    name: str
    params: tuple[tuple[str, Ty], ...]
    span: Span


@dataclass(frozen=True, slots=True)
class ConstDeclaration:
    name: str
    params: tuple[tuple[str, Ty], ...]
    ty: Ty
    span: Span


@dataclass(frozen=True, slots=True)
class DefDeclaration:
    name: str
    ctx: DualContext
    ty: Ty
    body: Term
    span: Span


@dataclass(frozen=True, slots=True)
class CheckDirective:
    name: str
    ctx: DualContext
    term: Term
    ty: Ty
    span: Span


@dataclass(frozen=True, slots=True)
class EqDirective:
    name: str
    ctx: DualContext
    ty: Ty
    left: Term
    right: Term
    mode: ModeSpec
    span: Span


@dataclass(frozen=True, slots=True)
class IsoDirective:
    """Witnesses `fwd_var : left_ty |- fwd : right_ty` and `bwd_var : right_ty |- bwd : left_ty`."""

    name: str
    ctx: DualContext
    left_ty: Ty
    right_ty: Ty
    fwd_var: str
    fwd: Term
    bwd_var: str
    bwd: Term
    mode: ModeSpec
    span: Span


type Declaration = TypeDeclaration | ConstDeclaration | DefDeclaration | CheckDirective | EqDirective | IsoDirective


class DeclKind(StrEnum):
    TYPE = "type"
    CONST = "const"
    DEF = "def"
    CHECK = "check"
    EQ = "eq"
    ISO = "iso"


def decl_kind(decl: Declaration) -> DeclKind:
    match decl:
        case TypeDeclaration():
            return DeclKind.TYPE
        case ConstDeclaration():
            return DeclKind.CONST
        case DefDeclaration():
            return DeclKind.DEF
        case CheckDirective():
            return DeclKind.CHECK
        case EqDirective():
            return DeclKind.EQ
        case IsoDirective():
            return DeclKind.ISO


@dataclass(frozen=True, slots=True)
class SourceModule:
    """Parsed declarations in source order."""

    decls: tuple[Declaration, ...]
    path: str | None = None

    def get(self, name: str) -> Declaration | None:
        for decl in self.decls:
            if decl.name == name:
                return decl
        return None
