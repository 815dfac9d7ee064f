"""Type synthesis for elaborated, already-checked terms.

No resource accounting happens here; every eliminator carries its motive and every
dependent pair its type, so the type is read off the syntax.
"""

from __future__ import annotations

from ildtt.core.modules.surface.models import Diagnostic
from ildtt.core.modules.syntax.context import DualContext, Signature
from ildtt.core.modules.syntax.models import (
    Abort,
    Ann,
    App,
    Bang,
    BangIntro,
    Case,
    Const,
    Ff,
    Fst,
    Id,
    IdElim,
    If,
    Inl,
    Inr,
    IntVar,
    Lam,
    LetBang,
    LetSigma,
    LetTensor,
    LetUnit,
    LinVar,
    Lolli,
    Pair,
    Pi,
    PiApp,
    PiLam,
    Plus,
    Refl,
    SigmaIntro,
    Snd,
    Sort,
    Star,
    Tensor,
    TensorPair,
    Term,
    Top,
    TopUnit,
    Tt,
    Two,
    Ty,
    Unit,
    With,
)
from ildtt.core.modules.syntax.ops import close_many, fresh_name, instantiate, open_many
from ildtt.errors import CheckError


def _fail(message: str) -> CheckError:
    return CheckError(Diagnostic(message=message, rule="Tm-Conv"))


def type_of(sig: Signature, ctx: DualContext, t: Term) -> Ty:
    match t:
        case IntVar(name=name):
            if (ty := ctx.int_type(name)) is None:
                raise _fail(f"unknown intuitionistic variable '{name}'")
            return ty
        case LinVar(name=name):
            if (ty := ctx.lin_type(name)) is None:
                raise _fail(f"unknown linear variable '{name}'")
            return ty
        case Const(name=name, args=args):
            return sig.const_decl(name).type_at(args)
        case Star():
            return Unit()
        case TopUnit():
            return Top()
        case Tt() | Ff():
            return Two()
        case TensorPair(left=left, right=right):
            return Tensor(type_of(sig, ctx, left), type_of(sig, ctx, right))
        case Pair(left=left, right=right):
            return With(type_of(sig, ctx, left), type_of(sig, ctx, right))
        case Inl(other=other, term=inner):
            return Plus(type_of(sig, ctx, inner), other)
        case Inr(other=other, term=inner):
            return Plus(other, type_of(sig, ctx, inner))
        case BangIntro(term=inner):
            return Bang(type_of(sig, ctx, inner))
        case Refl(term=inner):
            return Id(type_of(sig, ctx, inner), inner, inner)
        case SigmaIntro(ann=ann):
            if ann is None:
                raise _fail("dependent pair without a recorded type")
            return ann
        case Lam(x=x, ty=dom, body=body):
            name = fresh_name(x, ctx.names())
            cod = type_of(sig, ctx.with_lin(name, dom), open_many(body, [LinVar(name)]))
            return Lolli(dom, cod)
        case PiLam(x=x, ty=dom, body=body):
            name = fresh_name(x, ctx.names())
            cod = type_of(sig, ctx.with_int(name, dom), open_many(body, [IntVar(name)]))
            return Pi(x, dom, close_many(cod, [(name, Sort.INT)]))
        case App(fn=fn):
            match type_of(sig, ctx, fn):
                case Lolli(cod=cod):
                    return cod
                case other:
                    raise _fail(f"applying a term of non-function type {other!r}")
        case PiApp(fn=fn, arg=arg):
            match type_of(sig, ctx, fn):
                case Pi(cod=cod):
                    return instantiate(cod, arg)
                case other:
                    raise _fail(f"applying a term of non-dependent-function type {other!r}")
        case Fst(pair=pair) | Snd(pair=pair):
            match type_of(sig, ctx, pair):
                case With(left=left, right=right):
                    return left if isinstance(t, Fst) else right
                case other:
                    raise _fail(f"projecting from a term of type {other!r}")
        case LetUnit(motive=motive) | LetTensor(motive=motive) | LetBang(motive=motive) | LetSigma(motive=motive):
            return motive
        case Case(motive=motive) | Abort(motive=motive):
            return motive
        case IdElim(motive=motive, left=left, right=right):
            return instantiate(motive, left, right)
        case If(motive=motive, scrut=scrut):
            return instantiate(motive, scrut)
        case Ann(ty=ty):
            return ty
        case _:
            raise _fail(f"cannot synthesize a type for {t!r}")
