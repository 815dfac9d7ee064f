"""Comparison of canonical forms.

`conv` is type-directed: with eta on, functions are compared by applying them to a fresh
variable, with-pairs componentwise, and any two inhabitants of top are equal. Otherwise the
forms are compared structurally, opening binders of both sides with shared fresh names and
ignoring the types recorded inside terms (motives, injection annotations).
"""

from __future__ import annotations

from ildtt.core.modules.equality.models import Rewrite
from ildtt.core.modules.equality.normalize import Normalizer
from ildtt.core.modules.syntax.context import DualContext
from ildtt.core.modules.syntax.models import (
    Abort,
    App,
    BangIntro,
    Case,
    Const,
    Ff,
    Fst,
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
    Refl,
    SigmaIntro,
    Snd,
    Star,
    TensorPair,
    Term,
    Top,
    TopUnit,
    Tt,
    Two,
    Ty,
    With,
)
from ildtt.core.modules.syntax.ops import alpha_eq, instantiate, open_many


class Comparer:
    def __init__(self, normalizer: Normalizer) -> None:
        self.norm = normalizer
        self.sig = normalizer.sig
        self.eta = normalizer.mode.eta_negative

    def conv(self, ctx: DualContext, t: Term, u: Term, ty: Ty) -> bool:
        if alpha_eq(t, u):
            return True
        if self.eta:
            match ty:
                case Top():
                    self.norm.tick(Rewrite.TOP_ETA)
                    return True
                case Lolli(dom=dom, cod=cod):
                    name = self.norm.fresh(ctx, "x")
                    inner = ctx.with_lin(name, dom)
                    self._note(t, u, Lam, Rewrite.LOLLI_ETA)
                    left = self.norm.normalize(inner, App(t, LinVar(name)))
                    right = self.norm.normalize(inner, App(u, LinVar(name)))
                    return self.conv(inner, left, right, cod)
                case Pi(dom=dom, cod=cod):
                    name = self.norm.fresh(ctx, "x")
                    inner = ctx.with_int(name, dom)
                    self._note(t, u, PiLam, Rewrite.PI_ETA)
                    left = self.norm.normalize(inner, PiApp(t, IntVar(name)))
                    right = self.norm.normalize(inner, PiApp(u, IntVar(name)))
                    return self.conv(inner, left, right, instantiate(cod, IntVar(name)))
                case With(left=left_ty, right=right_ty):
                    self._note(t, u, Pair, Rewrite.WITH_ETA)
                    return self.conv(
                        ctx, self.norm.normalize(ctx, Fst(t)), self.norm.normalize(ctx, Fst(u)), left_ty
                    ) and self.conv(ctx, self.norm.normalize(ctx, Snd(t)), self.norm.normalize(ctx, Snd(u)), right_ty)
        return self.same(ctx, t, u)

    def _note(self, t: Term, u: Term, intro: type[Term], rewrite: Rewrite) -> None:
        if not (isinstance(t, intro) and isinstance(u, intro)):
            self.norm.tick(rewrite)

    def _at(self, ctx: DualContext, t: Term, u: Term) -> bool:
        return self.conv(ctx, t, u, self.norm.type_of(ctx, t))

    def _bodies(self, ctx: DualContext, t: Term, u: Term, field: str) -> bool:
        inner, values, _ = self.norm.enter(ctx, t, field)
        left = open_many(getattr(t, field), values)
        right = open_many(getattr(u, field), values)
        return self._at(inner, left, right)

    def same(self, ctx: DualContext, t: Term, u: Term) -> bool:
        match t, u:
            case (Star(), Star()) | (TopUnit(), TopUnit()) | (Tt(), Tt()) | (Ff(), Ff()):
                return True
            case (TensorPair(left=a1, right=b1), TensorPair(left=a2, right=b2)) | (
                Pair(left=a1, right=b1),
                Pair(left=a2, right=b2),
            ):
                return self._at(ctx, a1, a2) and self._at(ctx, b1, b2)
            case (Inl(term=a1), Inl(term=a2)) | (Inr(term=a1), Inr(term=a2)):
                return self._at(ctx, a1, a2)
            case (BangIntro(term=a1), BangIntro(term=a2)) | (Refl(term=a1), Refl(term=a2)):
                return self._at(ctx, a1, a2)
            case SigmaIntro(witness=w1, body=b1), SigmaIntro(witness=w2, body=b2):
                return self._at(ctx, w1, w2) and self._at(ctx, b1, b2)
            case (Lam(), Lam()) | (PiLam(), PiLam()):
                return self._bodies(ctx, t, u, "body")
            case LetUnit(scrut=s1, body=c1), LetUnit(scrut=s2, body=c2):
                return self.neutral(ctx, s1, s2) is not None and self._at(ctx, c1, c2)
            case (LetTensor(scrut=s1), LetTensor(scrut=s2)) | (LetBang(scrut=s1), LetBang(scrut=s2)):
                return self.neutral(ctx, s1, s2) is not None and self._bodies(ctx, t, u, "body")
            case LetSigma(scrut=s1), LetSigma(scrut=s2):
                return self.neutral(ctx, s1, s2) is not None and self._bodies(ctx, t, u, "body")
            case Case(scrut=s1), Case(scrut=s2):
                return (
                    self.neutral(ctx, s1, s2) is not None
                    and self._bodies(ctx, t, u, "left")
                    and self._bodies(ctx, t, u, "right")
                )
            case If(scrut=s1, then=a1, orelse=b1), If(scrut=s2, then=a2, orelse=b2):
                return self.conv(ctx, s1, s2, Two()) and self._at(ctx, a1, a2) and self._at(ctx, b1, b2)
            case IdElim(left=l1, right=r1, proof=p1), IdElim(left=l2, right=r2, proof=p2):
                return (
                    self._at(ctx, l1, l2)
                    and self._at(ctx, r1, r2)
                    and self.neutral(ctx, p1, p2) is not None
                    and self._bodies(ctx, t, u, "branch")
                )
            case Abort(scrut=s1), Abort(scrut=s2):
                return self.neutral(ctx, s1, s2) is not None
            case _:
                return self.neutral(ctx, t, u) is not None

    def neutral(self, ctx: DualContext, t: Term, u: Term) -> Ty | None:
        """Compare two elimination spines; their common type when they agree."""
        match t, u:
            case IntVar(name=a), IntVar(name=b) if a == b:
                return ctx.int_type(a)
            case LinVar(name=a), LinVar(name=b) if a == b:
                return ctx.lin_type(a)
            case Const(name=a, args=args1), Const(name=b, args=args2) if a == b and len(args1) == len(args2):
                decl = self.sig.const_decl(a)
                for k, ((_, param_ty), x, y) in enumerate(zip(decl.params, args1, args2, strict=True)):
                    if not self.conv(ctx, x, y, instantiate(param_ty, *args1[:k])):
                        return None
                return decl.type_at(args1)
            case App(fn=f1, arg=a1), App(fn=f2, arg=a2):
                match self.neutral(ctx, f1, f2):
                    case Lolli(dom=dom, cod=cod) if self.conv(ctx, a1, a2, dom):
                        return cod
            case PiApp(fn=f1, arg=a1), PiApp(fn=f2, arg=a2):
                match self.neutral(ctx, f1, f2):
                    case Pi(dom=dom, cod=cod) if self.conv(ctx, a1, a2, dom):
                        return instantiate(cod, a1)
            case Fst(pair=p1), Fst(pair=p2):
                match self.neutral(ctx, p1, p2):
                    case With(left=left):
                        return left
            case Snd(pair=p1), Snd(pair=p2):
                match self.neutral(ctx, p1, p2):
                    case With(right=right):
                        return right
        return None

