from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

from ildtt.core.modules.syntax.models import Term, Ty
from ildtt.core.modules.syntax.ops import instantiate, subst_int
from ildtt.errors import NotFoundError, ValidationError


class UsageFlag(StrEnum):
    """Usage state of a linear variable."""

    FRESH = "fresh"
    CONSUMED = "consumed"


@dataclass(frozen=True, slots=True)
class LinEntry:
    name: str
    ty: Ty
    flag: UsageFlag = UsageFlag.FRESH


@dataclass(frozen=True, slots=True)
class DualContext:
    """Intuitionistic region Δ and linear region Ξ."""

    int_region: tuple[tuple[str, Ty], ...] = ()
    lin_region: tuple[LinEntry, ...] = ()

    def int_type(self, name: str) -> Ty | None:
        for entry_name, ty in reversed(self.int_region):
            if entry_name == name:
                return ty
        return None

    def lin_type(self, name: str) -> Ty | None:
        for entry in self.lin_region:
            if entry.name == name:
                return entry.ty
        return None

    def with_int(self, name: str, ty: Ty) -> DualContext:
        return DualContext((*self.int_region, (name, ty)), self.lin_region)

    def with_lin(self, name: str, ty: Ty) -> DualContext:
        return DualContext(self.int_region, (*self.lin_region, LinEntry(name, ty)))

    def fresh(self) -> DualContext:
        """The same context with every linear entry marked unused."""
        return DualContext(self.int_region, tuple(LinEntry(e.name, e.ty) for e in self.lin_region))

    def names(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.int_region) | frozenset(e.name for e in self.lin_region)

    def consumed(self) -> tuple[LinEntry, ...]:
        return tuple(e for e in self.lin_region if e.flag is UsageFlag.CONSUMED)

    def refine(self, name: str, value: Term) -> DualContext:
        """Substitute `value` for the intuitionistic variable `name` in the linear region."""
        return DualContext(self.int_region, tuple(LinEntry(e.name, subst_int(e.ty, value, name), e.flag) for e in self.lin_region))


@dataclass(frozen=True, slots=True)
class TypeDecl:
    """Base type family; each parameter type is closed over the parameters before it."""

    name: str
    params: tuple[tuple[str, Ty], ...] = ()


@dataclass(frozen=True, slots=True)
class ConstDecl:
    """Term constant usable in the empty linear context; `ty` is closed over `params`."""

    name: str
    params: tuple[tuple[str, Ty], ...]
    ty: Ty

    def type_at(self, args: tuple[Term, ...]) -> Ty:
        return instantiate(self.ty, *args)


@dataclass(frozen=True, slots=True)
class Signature:
    """Declared base types and term constants, immutable once built."""

    types: dict[str, TypeDecl] = field(default_factory=dict)
    consts: dict[str, ConstDecl] = field(default_factory=dict)

    def type_decl(self, name: str) -> TypeDecl:
        if name not in self.types:
            raise NotFoundError(f"Base type '{name}' is not declared")
        return self.types[name]

    def const_decl(self, name: str) -> ConstDecl:
        if name not in self.consts:
            raise NotFoundError(f"Constant '{name}' is not declared")
        return self.consts[name]

    def declares(self, name: str) -> bool:
        return name in self.types or name in self.consts

    def with_type(self, decl: TypeDecl) -> Signature:
        if self.declares(decl.name):
            raise ValidationError(f"Name '{decl.name}' is already declared")
        return Signature({**self.types, decl.name: decl}, self.consts)

    def with_const(self, decl: ConstDecl) -> Signature:
        if self.declares(decl.name):
            raise ValidationError(f"Name '{decl.name}' is already declared")
        return Signature(self.types, {**self.consts, decl.name: decl})
