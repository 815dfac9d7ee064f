"""Decision procedure for judgemental equality.

Both sides are normalized and compared. When that fails and positive extensionality is
on, the first variable of a positive type that occurs in the problem is expanded into
its constructors (I, tensor, Sigma, bang, plus, 2, and identity proofs between two
distinct variables) and the resulting subproblems are decided in turn. Every expansion
costs one unit of fuel; running out is reported as undecided, never as unequal.

Types are equal when they have the same shape and their term indices are equal by the
same search, so a type conversion can also come out undecided.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ildtt.core.modules.equality.compare import Comparer
from ildtt.core.modules.equality.models import CanonForm, EqualityMode, Outcome, Rewrite, Verdict
from ildtt.core.modules.equality.normalize import Normalizer
from ildtt.core.modules.syntax.context import DualContext, LinEntry, Signature
from ildtt.core.modules.syntax.models import (
    App,
    Bang,
    BangIntro,
    BaseApp,
    Ff,
    Fst,
    Id,
    Inl,
    Inr,
    IntVar,
    LinVar,
    Lolli,
    Pi,
    PiApp,
    Plus,
    Refl,
    Sigma,
    SigmaIntro,
    Snd,
    Sort,
    Star,
    Tensor,
    TensorPair,
    Term,
    Top,
    Tt,
    Two,
    Ty,
    Unit,
    With,
    Zero,
)
from ildtt.core.modules.syntax.ops import all_names, alpha_eq, instantiate, subst_int, subst_lin

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Problem:
    ctx: DualContext
    left: Term
    right: Term
    ty: Ty

    def substitute(self, name: str, sort: Sort, value: Term, ctx: DualContext) -> Problem:
        if sort is Sort.LIN:
            return Problem(ctx, subst_lin(self.left, value, name), subst_lin(self.right, value, name), self.ty)
        return Problem(
            ctx, subst_int(self.left, value, name), subst_int(self.right, value, name), subst_int(self.ty, value, name)
        )


def _replace_lin(ctx: DualContext, name: str, lins: list[tuple[str, Ty]], ints: tuple[tuple[str, Ty], ...] = ()) -> DualContext:
    region: list[LinEntry] = []
    for entry in ctx.lin_region:
        if entry.name == name:
            region.extend(LinEntry(n, ty) for n, ty in lins)
        else:
            region.append(entry)
    return DualContext((*ctx.int_region, *ints), tuple(region))


def _drop_int(ctx: DualContext, name: str, value: Term) -> DualContext:
    """Remove an intuitionistic entry, substituting `value` for it in every later type."""
    return DualContext(
        tuple((n, subst_int(ty, value, name)) for n, ty in ctx.int_region if n != name),
        tuple(LinEntry(e.name, subst_int(e.ty, value, name), e.flag) for e in ctx.lin_region),
    )


class Search:
    """One equality query: normalizer, comparer and fuel shared across subproblems."""

    def __init__(self, signature: Signature, mode: EqualityMode, ceiling: int) -> None:
        self.mode = mode
        self.norm = Normalizer(signature, mode, ceiling)
        self.cmp = Comparer(self.norm)
        self.fuel_used = 0

    def decide(self, problem: Problem) -> Verdict:
        ctx = problem.ctx
        left = self.norm.normalize(ctx, problem.left)
        right = self.norm.normalize(ctx, problem.right)
        if self.cmp.conv(ctx, left, right, problem.ty):
            return Verdict.TRUE
        if not self.mode.ext_positive:
            return Verdict.FALSE
        problem = Problem(ctx, left, right, problem.ty)
        if self.mode.eta_negative and (parts := self._negative(problem)) is not None:
            return self._all(parts)
        expansion = self._expand(problem)
        if expansion is None:
            return Verdict.FALSE
        if self.fuel_used >= self.mode.fuel:
            logger.debug("fuel exhausted after %d expansions", self.fuel_used)
            return Verdict.UNDECIDED
        rewrite, subproblems = expansion
        self.fuel_used += 1
        self.norm.tick(rewrite)
        logger.debug("expanding by %s into %d subproblem(s)", rewrite, len(subproblems))
        return self._all(subproblems)

    def types(self, ctx: DualContext, a: Ty, b: Ty) -> Verdict:
        """Type equality: structural, with term indices decided like any other equation."""
        if alpha_eq(a, b):
            return Verdict.TRUE
        match a, b:
            case (Unit(), Unit()) | (Top(), Top()) | (Zero(), Zero()) | (Two(), Two()):
                return Verdict.TRUE
            case (Tensor(left=a1, right=b1), Tensor(left=a2, right=b2)) | (With(left=a1, right=b1), With(left=a2, right=b2)):
                return self._both(ctx, (a1, a2), (b1, b2))
            case (Plus(left=a1, right=b1), Plus(left=a2, right=b2)) | (Lolli(dom=a1, cod=b1), Lolli(dom=a2, cod=b2)):
                return self._both(ctx, (a1, a2), (b1, b2))
            case Bang(ty=a1), Bang(ty=a2):
                return self.types(ctx, a1, a2)
            case (Sigma(x=x, dom=d1, cod=c1), Sigma(dom=d2, cod=c2)) | (Pi(x=x, dom=d1, cod=c1), Pi(dom=d2, cod=c2)):
                if (verdict := self.types(ctx, d1, d2)) is Verdict.FALSE:
                    return verdict
                point = IntVar(self.norm.fresh(ctx, x))
                inner = ctx.with_int(point.name, d1)
                return Verdict.all_of([verdict, self.types(inner, instantiate(c1, point), instantiate(c2, point))])
            case Id(ty=t1, left=l1, right=r1), Id(ty=t2, left=l2, right=r2):
                if (verdict := self.types(ctx, t1, t2)) is Verdict.FALSE:
                    return verdict
                return Verdict.all_of([verdict, self._all([Problem(ctx, l1, l2, t1), Problem(ctx, r1, r2, t1)])])
            case BaseApp(name=n1, args=args1), BaseApp(name=n2, args=args2) if n1 == n2 and len(args1) == len(args2):
                params = self.norm.sig.type_decl(n1).params
                problems = [
                    Problem(ctx, x, y, instantiate(param_ty, *args1[:k]))
                    for k, ((_, param_ty), x, y) in enumerate(zip(params, args1, args2, strict=True))
                ]
                return self._all(problems)
        return Verdict.FALSE

    def _both(self, ctx: DualContext, first: tuple[Ty, Ty], second: tuple[Ty, Ty]) -> Verdict:
        if (verdict := self.types(ctx, *first)) is Verdict.FALSE:
            return verdict
        return Verdict.all_of([verdict, self.types(ctx, *second)])

    def _all(self, problems: list[Problem]) -> Verdict:
        verdicts: list[Verdict] = []
        for p in problems:
            verdict = self.decide(p)
            if verdict is Verdict.FALSE:
                return verdict
            verdicts.append(verdict)
        return Verdict.all_of(verdicts)

    def _negative(self, p: Problem) -> list[Problem] | None:
        """Move under lambdas and into with-pairs so positive variables bound there can be expanded."""
        match p.ty:
            case Lolli(dom=dom, cod=cod):
                name = self.norm.fresh(p.ctx, "x")
                arg = LinVar(name)
                return [Problem(p.ctx.with_lin(name, dom), App(p.left, arg), App(p.right, arg), cod)]
            case Pi(dom=dom, cod=cod):
                name = self.norm.fresh(p.ctx, "x")
                point = IntVar(name)
                return [Problem(p.ctx.with_int(name, dom), PiApp(p.left, point), PiApp(p.right, point), instantiate(cod, point))]
            case With(left=left_ty, right=right_ty):
                return [Problem(p.ctx, Fst(p.left), Fst(p.right), left_ty), Problem(p.ctx, Snd(p.left), Snd(p.right), right_ty)]
        return None

    def _expand(self, p: Problem) -> tuple[Rewrite, list[Problem]] | None:
        """Choose the first expandable variable, linear region first."""
        ctx = p.ctx
        occurring = all_names(p.left) | all_names(p.right) | all_names(p.ty)
        for entry in ctx.lin_region:
            if entry.name in occurring and (found := self._expand_var(p, entry.name, Sort.LIN, entry.ty)) is not None:
                return found
        for name, ty in ctx.int_region:
            if name in occurring and (found := self._expand_var(p, name, Sort.INT, ty)) is not None:
                return found
        return None

    def _expand_var(self, p: Problem, name: str, sort: Sort, ty: Ty) -> tuple[Rewrite, list[Problem]] | None:
        ctx = p.ctx
        match sort, ty:
            case Sort.LIN, Unit():
                return Rewrite.UNIT_U, [p.substitute(name, sort, Star(), _replace_lin(ctx, name, []))]
            case Sort.LIN, Tensor(left=left, right=right):
                a = self.norm.fresh(ctx, "a")
                b = self.norm.fresh(ctx, "b", a)
                inner = _replace_lin(ctx, name, [(a, left), (b, right)])
                return Rewrite.TENSOR_U, [p.substitute(name, sort, TensorPair(LinVar(a), LinVar(b)), inner)]
            case Sort.LIN, Sigma(x=x, dom=dom, cod=cod) as sigma:
                xn = self.norm.fresh(ctx, x)
                b = self.norm.fresh(ctx, "b", xn)
                inner = _replace_lin(ctx, name, [(b, instantiate(cod, IntVar(xn)))], ((xn, dom),))
                value = SigmaIntro(IntVar(xn), LinVar(b), sigma)
                return Rewrite.SIGMA_U, [p.substitute(name, sort, value, inner)]
            case Sort.LIN, Bang(ty=inner_ty):
                xn = self.norm.fresh(ctx, "x")
                inner = _replace_lin(ctx, name, [], ((xn, inner_ty),))
                return Rewrite.BANG_U, [p.substitute(name, sort, BangIntro(IntVar(xn)), inner)]
            case Sort.LIN, Plus(left=left, right=right):
                a = self.norm.fresh(ctx, "a")
                return Rewrite.PLUS_U, [
                    p.substitute(name, sort, Inl(right, LinVar(a)), _replace_lin(ctx, name, [(a, left)])),
                    p.substitute(name, sort, Inr(left, LinVar(a)), _replace_lin(ctx, name, [(a, right)])),
                ]
            case Sort.INT, Two():
                return Rewrite.TWO_U, [
                    p.substitute(name, sort, Tt(), _drop_int(ctx, name, Tt())),
                    p.substitute(name, sort, Ff(), _drop_int(ctx, name, Ff())),
                ]
            case _, Id(left=IntVar(name=x), right=IntVar(name=x2)) if x != x2 and ctx.int_type(x) is not None and ctx.int_type(x2) is not None:
                # Id-U: the proof becomes refl and the right endpoint collapses onto the left.
                inner = _drop_int(ctx, x2, IntVar(x))
                if sort is Sort.LIN:
                    inner = _replace_lin(inner, name, [])
                else:
                    inner = _drop_int(inner, name, Refl(IntVar(x)))
                collapsed = p.substitute(x2, Sort.INT, IntVar(x), inner)
                return Rewrite.ID_U, [collapsed.substitute(name, sort, Refl(IntVar(x)), inner)]
        return None


class Engine:
    """Judgemental equality over one signature at one mode."""

    def __init__(self, signature: Signature, mode: EqualityMode | None = None, ceiling: int = 200_000) -> None:
        self.sig = signature
        self.mode = mode or EqualityMode()
        self.ceiling = ceiling

    def normalize(self, ctx: DualContext, t: Term) -> CanonForm:
        norm = Normalizer(self.sig, self.mode, self.ceiling)
        term = norm.normalize(ctx, t)
        logger.debug("normalized in %d steps", norm.steps)
        return CanonForm(term, self.mode, norm.steps, tuple(norm.trace))

    def equal(self, ctx: DualContext, t: Term, u: Term, ty: Ty) -> Outcome:
        search = Search(self.sig, self.mode, self.ceiling)
        verdict = search.decide(Problem(ctx, t, u, ty))
        return Outcome(verdict, tuple(search.norm.trace), search.fuel_used)

    def term_equal(self, ctx: DualContext, left: Term, right: Term, ty: Ty) -> Verdict:
        return self.equal(ctx, left, right, ty).verdict

    def type_equal(self, ctx: DualContext, left: Ty, right: Ty) -> Verdict:
        return Search(self.sig, self.mode, self.ceiling).types(ctx, left, right)
