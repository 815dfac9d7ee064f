"""Abstract syntax of types and terms.

Binders are locally nameless: a bound occurrence is a `Bound` de Bruijn index counted
outward across every binder (types and terms share one index space), a free occurrence is
an `IntVar` or `LinVar` carrying its name. Binder name hints are excluded from equality,
so structural `==` is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import ClassVar


class Sort(StrEnum):
    """Region a variable lives in."""

    INT = "int"
    LIN = "lin"


class Node:
    """Common base of types and terms.

    `binders` maps a field name to the binders scoping over that field, as pairs of
    (name-hint field, sort) in binding order; the last one is innermost.
    `additive` lists fields that share one linear context (alternatives, not splits).
    """

    __slots__ = ()

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {}
    additive: ClassVar[tuple[str, ...]] = ()


class Ty(Node):
    """A type."""

    __slots__ = ()


class Term(Node):
    """A term."""

    __slots__ = ()


# Types


@dataclass(frozen=True, slots=True)
class BaseApp(Ty):
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Unit(Ty):
    pass


@dataclass(frozen=True, slots=True)
class Tensor(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True, slots=True)
class Lolli(Ty):
    dom: Ty
    cod: Ty


@dataclass(frozen=True, slots=True)
class Top(Ty):
    pass


@dataclass(frozen=True, slots=True)
class With(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True, slots=True)
class Zero(Ty):
    pass


@dataclass(frozen=True, slots=True)
class Plus(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True, slots=True)
class Bang(Ty):
    ty: Ty


@dataclass(frozen=True, slots=True)
class Sigma(Ty):
    x: str = field(compare=False)
    dom: Ty
    cod: Ty

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"cod": (("x", Sort.INT),)}


@dataclass(frozen=True, slots=True)
class Pi(Ty):
    x: str = field(compare=False)
    dom: Ty
    cod: Ty

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"cod": (("x", Sort.INT),)}


@dataclass(frozen=True, slots=True)
class Id(Ty):
    ty: Ty
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Two(Ty):
    pass


# Terms


@dataclass(frozen=True, slots=True)
class IntVar(Term):
    name: str


@dataclass(frozen=True, slots=True)
class LinVar(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Bound(Term):
    index: int


@dataclass(frozen=True, slots=True)
class Const(Term):
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Star(Term):
    pass


@dataclass(frozen=True, slots=True)
class LetUnit(Term):
    motive: Ty
    scrut: Term
    body: Term


@dataclass(frozen=True, slots=True)
class TensorPair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class LetTensor(Term):
    motive: Ty
    scrut: Term
    x: str = field(compare=False)
    y: str = field(compare=False)
    body: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"body": (("x", Sort.LIN), ("y", Sort.LIN))}


@dataclass(frozen=True, slots=True)
class Lam(Term):
    x: str = field(compare=False)
    ty: Ty
    body: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"body": (("x", Sort.LIN),)}


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class TopUnit(Term):
    pass


@dataclass(frozen=True, slots=True)
class Pair(Term):
    left: Term
    right: Term

    additive: ClassVar[tuple[str, ...]] = ("left", "right")


@dataclass(frozen=True, slots=True)
class Fst(Term):
    pair: Term


@dataclass(frozen=True, slots=True)
class Snd(Term):
    pair: Term


@dataclass(frozen=True, slots=True)
class Abort(Term):
    motive: Ty
    scrut: Term


@dataclass(frozen=True, slots=True)
class Inl(Term):
    other: Ty
    term: Term


@dataclass(frozen=True, slots=True)
class Inr(Term):
    other: Ty
    term: Term


@dataclass(frozen=True, slots=True)
class Case(Term):
    motive: Ty
    scrut: Term
    x: str = field(compare=False)
    left: Term
    y: str = field(compare=False)
    right: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"left": (("x", Sort.LIN),), "right": (("y", Sort.LIN),)}
    additive: ClassVar[tuple[str, ...]] = ("left", "right")


@dataclass(frozen=True, slots=True)
class BangIntro(Term):
    term: Term


@dataclass(frozen=True, slots=True)
class LetBang(Term):
    motive: Ty
    scrut: Term
    x: str = field(compare=False)
    body: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"body": (("x", Sort.INT),)}


@dataclass(frozen=True, slots=True)
class SigmaIntro(Term):
    """`!a (x) b`; `ann` is filled in by the checker."""

    witness: Term
    body: Term
    ann: Sigma | None = None


@dataclass(frozen=True, slots=True)
class LetSigma(Term):
    motive: Ty
    scrut: Term
    x: str = field(compare=False)
    y: str = field(compare=False)
    body: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"body": (("x", Sort.INT), ("y", Sort.LIN))}


@dataclass(frozen=True, slots=True)
class PiLam(Term):
    x: str = field(compare=False)
    ty: Ty
    body: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"body": (("x", Sort.INT),)}


@dataclass(frozen=True, slots=True)
class PiApp(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Refl(Term):
    term: Term


@dataclass(frozen=True, slots=True)
class IdElim(Term):
    """`idelim[x, x2. motive] (left, right, proof) with z -> branch`."""

    x: str = field(compare=False)
    x2: str = field(compare=False)
    motive: Ty
    left: Term
    right: Term
    proof: Term
    z: str = field(compare=False)
    branch: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {
        "motive": (("x", Sort.INT), ("x2", Sort.INT)),
        "branch": (("z", Sort.INT),),
    }


@dataclass(frozen=True, slots=True)
class Tt(Term):
    pass


@dataclass(frozen=True, slots=True)
class Ff(Term):
    pass


@dataclass(frozen=True, slots=True)
class If(Term):
    z: str = field(compare=False)
    motive: Ty
    scrut: Term
    then: Term
    orelse: Term

    binders: ClassVar[dict[str, tuple[tuple[str, Sort], ...]]] = {"motive": (("z", Sort.INT),)}
    additive: ClassVar[tuple[str, ...]] = ("then", "orelse")


@dataclass(frozen=True, slots=True)
class Ann(Term):
    term: Term
    ty: Ty


# Eliminators binding a continuation that may be hoisted by commuting conversions.
LET_FORMS = (LetUnit, LetTensor, LetBang, LetSigma, IdElim)
CASE_FORMS = (Case, If, Abort)
