from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import StrEnum

from pydantic import BaseModel, Field

from ildtt.core.modules.equality.models import Rewrite
from ildtt.core.modules.surface.models import DeclKind, Diagnostic, SourceModule
from ildtt.core.modules.syntax.context import DualContext, Signature, UsageFlag
from ildtt.core.modules.syntax.models import Term, Ty
from ildtt.core.modules.syntax.ops import all_names, occurrences

RULES = (
    "Ctx", "Ty-Form", "Int-Var", "Lin-Var", "Const", "Ann", "Tm-Conv",
    "I-I", "I-E", "Tensor-I", "Tensor-E", "Lolli-I", "Lolli-E", "Top-I",
    "With-I", "With-E1", "With-E2", "Zero-E", "Plus-I1", "Plus-I2", "Plus-E",
    "Bang-I", "Bang-E", "Sigma-I", "Sigma-E", "Pi-I", "Pi-E",
    "Id-F", "Id-I", "Id-E", "Two-I1", "Two-I2", "Two-E", "Eq", "Iso",
    "Int-Weak", "Int-Exch", "Lin-Exch", "Int-Subst", "Lin-Subst",
    "Tm-Eq-R", "Tm-Eq-S", "Tm-Eq-T",
    *(str(rewrite) for rewrite in Rewrite),
)  # fmt: skip

# Rules whose conclusion instantiates a family at a term.
INSTANTIATING = frozenset({"Pi-E", "Sigma-I", "Two-E", "Id-E"})


def _in_order(used: list[str], declared: list[str]) -> bool:
    positions = [declared.index(name) for name in used if name in declared]
    return positions == sorted(positions)


@dataclass(frozen=True, slots=True)
class ResourceState:
    """Linear variables consumed so far, and whether a top or abort may absorb the rest."""

    consumed: frozenset[str] = frozenset()
    slack: bool = False

    def consume(self, name: str) -> ResourceState:
        return ResourceState(self.consumed | {name}, self.slack)

    def reset_slack(self) -> ResourceState:
        return ResourceState(self.consumed, slack=False)


@dataclass(frozen=True, slots=True)
class Derivation:
    """A checked judgement `ctx |- term : ty` concluded by `rule` from `children`.

    `term` is elaborated: dependent pairs carry their type and ascriptions are gone.
    In `ctx` the linear entries used by this node are flagged consumed.
    """

    rule: str
    term: Term
    ty: Ty
    ctx: DualContext
    children: tuple[Derivation, ...] = ()
    slack: bool = False

    def walk(self) -> Iterator[Derivation]:
        yield self
        for child in self.children:
            yield from child.walk()

    def rules(self) -> frozenset[str]:
        return frozenset(node.rule for node in self.walk())

    def consumed_names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.ctx.lin_region if e.flag is UsageFlag.CONSUMED)

    def structural_rules(self) -> set[str]:
        """Structural rules the judgement relies on, read off its root.

        An intuitionistic entry nothing mentions was weakened away, variables used out of
        their declared order were exchanged, and a family instantiated at a term is an
        intuitionistic substitution.
        """
        used = list(occurrences(self.term))
        ints = [name for name, _ in self.ctx.int_region]
        mentioned = set(used) | all_names(self.ty)
        mentioned.update(name for _, ty in self.ctx.int_region for name in all_names(ty))
        mentioned.update(name for e in self.ctx.lin_region for name in all_names(e.ty))
        rules: set[str] = set()
        if any(name not in mentioned for name in ints):
            rules.add("Int-Weak")
        if not _in_order(used, ints):
            rules.add("Int-Exch")
        if not _in_order(used, [e.name for e in self.ctx.lin_region]):
            rules.add("Lin-Exch")
        if self.rules() & INSTANTIATING:
            rules.add("Int-Subst")
        return rules


class DeclVerdict(StrEnum):
    OK = "ok"
    ERROR = "error"
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"


class DeclResult(BaseModel):
    name: str = Field(..., description="Declaration name, `check@LINE` for check directives")
    kind: DeclKind = Field(..., description="Declaration kind")
    verdict: DeclVerdict = Field(..., description="Outcome of checking the declaration")
    diagnostic: Diagnostic | None = Field(None, description="First failure, when the declaration failed")
    rules: list[str] = Field(default_factory=list, description="Rule names used by the accepted derivations")
    trace: list[str] = Field(default_factory=list, description="Rewrite steps of equality directives")

    @property
    def ok(self) -> bool:
        return self.verdict in (DeclVerdict.OK, DeclVerdict.TRUE)


class ModuleReport(BaseModel):
    path: str | None = Field(None, description="Source file, when checked from disk")
    results: list[DeclResult] = Field(default_factory=list, description="Per-declaration results in source order")

    @property
    def ok(self) -> bool:
        return all(result.ok for result in self.results)

    def rules_used(self) -> set[str]:
        """Typing rules of accepted declarations, with the rewrites of true equations."""
        return {rule for result in self.results if result.ok for rule in (*result.rules, *result.trace)}

    def get(self, name: str) -> DeclResult | None:
        return next((r for r in self.results if r.name == name), None)


@dataclass
class CheckedModule:
    """Everything produced by checking a module, for downstream commands."""

    module: SourceModule
    signature: Signature
    report: ModuleReport
    derivations: dict[str, Derivation] = field(default_factory=dict)
    equations: dict[str, tuple[Derivation, Derivation]] = field(default_factory=dict)
    isos: dict[str, tuple[Derivation, Derivation]] = field(default_factory=dict)
