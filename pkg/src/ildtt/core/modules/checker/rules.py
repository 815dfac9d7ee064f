"""Bidirectional, resource-threaded typing rules.

Linear resources are threaded through each judgement: a `ResourceState` goes in, the
premises consume from it left to right, and the state after the last premise comes out.
Additive premises (with-pairs, case and if branches) start from the same state and must
agree on what they consume; a top or abort below them lets a branch absorb the rest.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import replace
from typing import NamedTuple, Protocol

from ildtt.core.modules.checker.models import Derivation, ResourceState
from ildtt.core.modules.equality.models import Verdict
from ildtt.core.modules.surface.models import Diagnostic, Span
from ildtt.core.modules.surface.printer import print_term, print_type
from ildtt.core.modules.syntax.context import DualContext, LinEntry, Signature, UsageFlag
from ildtt.core.modules.syntax.models import (
    Abort,
    Ann,
    App,
    Bang,
    BangIntro,
    BaseApp,
    Bound,
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
    Sigma,
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
    Zero,
)
from ildtt.core.modules.syntax.ops import close_many, fresh_name, instantiate, open_many
from ildtt.errors import CheckError, IldttError

logger = logging.getLogger(__name__)


class Conversion(Protocol):
    """Judgemental equality as needed by the checker."""

    def type_equal(self, ctx: DualContext, left: Ty, right: Ty) -> Verdict: ...

    def term_equal(self, ctx: DualContext, left: Term, right: Term, ty: Ty) -> Verdict: ...


class Step(NamedTuple):
    rule: str
    term: Term
    ty: Ty
    children: tuple[Derivation, ...]
    state: ResourceState


class Checker:
    """Typing rules over one signature.

    Not thread-safe: keeps the set of rules used and the linear names hidden while
    checking intuitionistic positions. Create one per declaration.
    """

    def __init__(self, signature: Signature, conversion: Conversion | None = None, span: Span | None = None) -> None:
        self.sig = signature
        self._conversion = conversion
        self.span = span or Span(1, 1)
        self.rules_used: set[str] = set()
        self._hidden: frozenset[str] = frozenset()

    @property
    def conversion(self) -> Conversion:
        if self._conversion is None:
            from ildtt.core.modules.equality.engine import Engine  # noqa: PLC0415

            self._conversion = Engine(self.sig)
        return self._conversion

    def error(self, message: str, rule: str) -> CheckError:
        return CheckError(Diagnostic(line=self.span.line, column=self.span.column, message=message, rule=rule))

    # Contexts and types

    def check_context(self, ctx: DualContext) -> None:
        """Context formation: each type is well-formed over the intuitionistic entries before it."""
        seen: set[str] = set()
        prefix = DualContext()
        for name, ty in ctx.int_region:
            if name in seen:
                raise self.error(f"duplicate name '{name}' in context", "Ctx")
            self.check_type(prefix, ty)
            seen.add(name)
            prefix = prefix.with_int(name, ty)
        for entry in ctx.lin_region:
            if entry.name in seen:
                raise self.error(f"duplicate name '{entry.name}' in context", "Ctx")
            self.check_type(prefix, entry.ty)
            seen.add(entry.name)
        self.rules_used.add("Ctx")

    def check_type(self, ctx: DualContext, ty: Ty) -> None:
        """Type formation in the intuitionistic part of `ctx`."""
        with self._hiding(ctx):
            self._type(DualContext(ctx.int_region, ()), ty)

    def _type(self, ctx: DualContext, ty: Ty) -> None:
        match ty:
            case Unit() | Top() | Zero() | Two():
                pass
            case Tensor(left=left, right=right) | Lolli(dom=left, cod=right):
                self._type(ctx, left)
                self._type(ctx, right)
            case With(left=left, right=right) | Plus(left=left, right=right):
                self._type(ctx, left)
                self._type(ctx, right)
            case Bang(ty=inner):
                self._type(ctx, inner)
            case Sigma(x=x, dom=dom, cod=cod) | Pi(x=x, dom=dom, cod=cod):
                self._type(ctx, dom)
                name = self._fresh(ctx, x)
                self._type(ctx.with_int(name, dom), instantiate(cod, IntVar(name)))
            case BaseApp(name=name, args=args):
                try:
                    decl = self.sig.type_decl(name)
                except IldttError as e:
                    raise self.error(str(e), "Ty-Form") from None
                if len(args) != len(decl.params):
                    raise self.error(f"'{name}' takes {len(decl.params)} argument(s), got {len(args)}", "Ty-Form")
                self._arguments(ctx, decl.params, args, "Ty-Form")
            case Id(ty=carrier, left=left, right=right):
                self._type(ctx, carrier)
                self._run(ctx, ResourceState(), left, carrier)
                self._run(ctx, ResourceState(), right, carrier)
                self.rules_used.add("Id-F")
                return
            case _:
                raise self.error(f"ill-formed type {ty!r}", "Ty-Form")
        self.rules_used.add("Ty-Form")

    def _arguments(self, ctx: DualContext, params: tuple[tuple[str, Ty], ...], args: tuple[Term, ...], rule: str) -> list[Term]:
        elaborated: list[Term] = []
        for (_, param_ty), arg in zip(params, args, strict=True):
            expected = instantiate(param_ty, *elaborated)
            d = self._intuitionistic(ctx, arg, expected)
            elaborated.append(d.term)
        if len(params) != len(args):
            raise self.error("wrong number of arguments", rule)
        return elaborated

    # Judgements

    def derive(self, ctx: DualContext, t: Term, ty: Ty) -> Derivation:
        """Check a closed judgement `ctx |- t : ty`: every linear entry must be used."""
        d, out = self._run(ctx, ResourceState(), t, ty)
        self._require_used(ctx, out)
        return d

    def infer(self, ctx: DualContext, state: ResourceState, t: Term) -> tuple[Derivation, ResourceState]:
        return self._run(ctx, state, t, None)

    def check(self, ctx: DualContext, state: ResourceState, t: Term, ty: Ty) -> tuple[Derivation, ResourceState]:
        return self._run(ctx, state, t, ty)

    def replay(self, d: Derivation) -> None:
        """Re-derive every node in the context it consumed and compare the rules applied."""
        for node in d.walk():
            lin = tuple(LinEntry(e.name, e.ty) for e in node.ctx.consumed())
            again = Checker(self.sig, self._conversion, self.span).derive(DualContext(node.ctx.int_region, lin), node.term, node.ty)
            if again.rule != node.rule or [c.rule for c in again.children] != [c.rule for c in node.children]:
                raise self.error(f"derivation node {print_term(node.term)} does not replay", node.rule)

    def _require_used(self, ctx: DualContext, out: ResourceState) -> None:
        if out.slack:
            return
        for entry in ctx.lin_region:
            if entry.name not in out.consumed:
                raise self.error(f"linear variable '{entry.name}' is never used", "Lin-Var")

    # Machinery

    @contextmanager
    def _hiding(self, ctx: DualContext) -> Iterator[None]:
        saved = self._hidden
        self._hidden = saved | {e.name for e in ctx.lin_region}
        try:
            yield
        finally:
            self._hidden = saved

    def _fresh(self, ctx: DualContext, hint: str, *avoid: str) -> str:
        return fresh_name(hint, ctx.names() | self._hidden | set(avoid))

    def _intuitionistic(self, ctx: DualContext, t: Term, ty: Ty | None) -> Derivation:
        """Check `t` in the intuitionistic context alone (`ctx; .`)."""
        with self._hiding(ctx):
            d, _ = self._run(DualContext(ctx.int_region, ()), ResourceState(), t, ty)
        return d

    def _run(self, ctx: DualContext, st: ResourceState, t: Term, expected: Ty | None) -> tuple[Derivation, ResourceState]:
        if isinstance(t, Ann):
            self.check_type(ctx, t.ty)
            self.rules_used.add("Ann")
            d, out = self._run(ctx, st, t.term, t.ty)
            if expected is not None:
                self._convert(ctx, t.ty, expected, "Ann")
                d = replace(d, ty=expected)
            return d, out
        step = self._infer(ctx, st.reset_slack(), t) if expected is None else self._check(ctx, st.reset_slack(), t, expected)
        out = step.state
        used = out.consumed - st.consumed
        node_ctx = DualContext(
            ctx.int_region,
            tuple(
                LinEntry(e.name, e.ty, UsageFlag.CONSUMED if e.name in used else UsageFlag.FRESH)
                for e in ctx.lin_region
                if e.name not in st.consumed
            ),
        )
        self.rules_used.add(step.rule)
        d = Derivation(step.rule, step.term, step.ty, node_ctx, step.children, out.slack)
        return d, ResourceState(out.consumed, st.slack or out.slack)

    def _scoped(
        self, ctx: DualContext, st: ResourceState, body: Term, linear: tuple[str, ...], expected: Ty | None, rule: str
    ) -> tuple[Derivation, ResourceState]:
        """Check a binder body; the linear names it binds must be used unless it has slack."""
        d, out = self._run(ctx, st.reset_slack(), body, expected)
        for name in linear:
            if name not in out.consumed and not out.slack:
                raise self.error(f"linear variable '{name}' bound here is never used", rule)
        return d, ResourceState(out.consumed - set(linear), st.slack or out.slack)

    def _join(self, st: ResourceState, left: ResourceState, right: ResourceState, rule: str) -> ResourceState:
        if left.slack and right.slack:
            return ResourceState(left.consumed | right.consumed, slack=True)
        if left.slack or right.slack:
            loose, tight = (left, right) if left.slack else (right, left)
            if not loose.consumed <= tight.consumed:
                extra = ", ".join(sorted(loose.consumed - tight.consumed))
                raise self.error(f"branches disagree on linear resources: only one branch uses {extra}", rule)
            return ResourceState(tight.consumed, st.slack)
        if left.consumed != right.consumed:
            extra = ", ".join(sorted(left.consumed ^ right.consumed))
            raise self.error(f"branches disagree on linear resources: {extra} used in only one branch", rule)
        return ResourceState(left.consumed, st.slack)

    def _convert(self, ctx: DualContext, actual: Ty, expected: Ty, rule: str) -> None:
        if actual == expected:
            return
        verdict = self.conversion.type_equal(DualContext(ctx.int_region, ()), actual, expected)
        if verdict is Verdict.TRUE:
            self.rules_used.add("Tm-Conv")
            return
        suffix = " (equality undecided)" if verdict is Verdict.UNDECIDED else ""
        raise self.error(f"type mismatch: expected {print_type(expected)}, found {print_type(actual)}{suffix}", rule)

    def _shape[T: Ty](self, ty: Ty, former: type[T], what: str, rule: str) -> T:
        if not isinstance(ty, former):
            raise self.error(f"{what} has type {print_type(ty)}, not a {former.__name__.lower()} type", rule)
        return ty

    # Checking mode

    def _check(self, ctx: DualContext, st: ResourceState, t: Term, expected: Ty) -> Step:
        match t, expected:
            case Lam(x=x, ty=dom, body=body), Lolli(dom=want_dom, cod=cod):
                self.check_type(ctx, dom)
                self._convert(ctx, dom, want_dom, "Lolli-I")
                return self._lam(ctx, st, x, dom, body, cod, expected)
            case PiLam(x=x, ty=dom, body=body), Pi(dom=want_dom, cod=cod):
                self.check_type(ctx, dom)
                self._convert(ctx, dom, want_dom, "Pi-I")
                name = self._fresh(ctx, x)
                d, out = self._scoped(
                    ctx.with_int(name, dom), st, open_many(body, [IntVar(name)]), (), instantiate(cod, IntVar(name)), "Pi-I"
                )
                return Step("Pi-I", PiLam(x, dom, close_many(d.term, [(name, Sort.INT)])), expected, (d,), out)
            case TensorPair(left=left, right=right), Tensor(left=want_left, right=want_right):
                dl, st1 = self._run(ctx, st, left, want_left)
                dr, st2 = self._run(ctx, st1, right, want_right)
                return Step("Tensor-I", TensorPair(dl.term, dr.term), expected, (dl, dr), st2)
            case Pair(left=left, right=right), With(left=want_left, right=want_right):
                dl, sl = self._run(ctx, st.reset_slack(), left, want_left)
                dr, sr = self._run(ctx, st.reset_slack(), right, want_right)
                return Step("With-I", Pair(dl.term, dr.term), expected, (dl, dr), self._join(st, sl, sr, "With-I"))
            case SigmaIntro(witness=witness, body=body), Sigma(dom=dom, cod=cod):
                dw = self._intuitionistic(ctx, witness, dom)
                db, st1 = self._run(ctx, st, body, instantiate(cod, dw.term))
                return Step("Sigma-I", SigmaIntro(dw.term, db.term, expected), expected, (dw, db), st1)
            case Inl(other=other, term=inner), Plus(left=want_left, right=want_right):
                self.check_type(ctx, other)
                self._convert(ctx, other, want_right, "Plus-I1")
                d, st1 = self._run(ctx, st, inner, want_left)
                return Step("Plus-I1", Inl(other, d.term), expected, (d,), st1)
            case Inr(other=other, term=inner), Plus(left=want_left, right=want_right):
                self.check_type(ctx, other)
                self._convert(ctx, other, want_left, "Plus-I2")
                d, st1 = self._run(ctx, st, inner, want_right)
                return Step("Plus-I2", Inr(other, d.term), expected, (d,), st1)
            case BangIntro(term=inner), Bang(ty=want):
                d = self._intuitionistic(ctx, inner, want)
                return Step("Bang-I", BangIntro(d.term), expected, (d,), st)
            case Refl(term=inner), Id(ty=carrier, left=left, right=right):
                d = self._intuitionistic(ctx, inner, carrier)
                ictx = DualContext(ctx.int_region, ())
                for end in (left, right):
                    verdict = self.conversion.term_equal(ictx, d.term, end, carrier)
                    if verdict is not Verdict.TRUE:
                        raise self.error(
                            f"refl !{print_term(d.term)} does not prove {print_type(expected)}: "
                            f"{print_term(d.term)} and {print_term(end)} are not equal",
                            "Id-I",
                        )
                return Step("Id-I", Refl(d.term), expected, (d,), st)
            case TopUnit(), Top():
                return Step("Top-I", TopUnit(), expected, (), ResourceState(st.consumed, slack=True))
            case _:
                step = self._infer(ctx, st, t)
                self._convert(ctx, step.ty, expected, step.rule)
                return step._replace(ty=expected)

    def _lam(self, ctx: DualContext, st: ResourceState, x: str, dom: Ty, body: Term, cod: Ty | None, expected: Ty | None) -> Step:
        name = self._fresh(ctx, x)
        d, out = self._scoped(ctx.with_lin(name, dom), st, open_many(body, [LinVar(name)]), (name,), cod, "Lolli-I")
        ty = expected if expected is not None else Lolli(dom, d.ty)
        return Step("Lolli-I", Lam(x, dom, close_many(d.term, [(name, Sort.LIN)])), ty, (d,), out)

    # Inference mode

    def _infer(self, ctx: DualContext, st: ResourceState, t: Term) -> Step:
        match t:
            case IntVar(name=name):
                if (ty := ctx.int_type(name)) is None:
                    raise self.error(f"unknown intuitionistic variable '{name}'", "Int-Var")
                return Step("Int-Var", t, ty, (), st)
            case LinVar(name=name):
                return self._lin_var(ctx, st, name)
            case Bound():
                raise self.error("ill-scoped bound variable", "Int-Var")
            case Const(name=name, args=args):
                try:
                    decl = self.sig.const_decl(name)
                except IldttError as e:
                    raise self.error(str(e), "Const") from None
                if len(args) != len(decl.params):
                    raise self.error(f"'{name}' takes {len(decl.params)} argument(s), got {len(args)}", "Const")
                elaborated = tuple(self._arguments(ctx, decl.params, args, "Const"))
                return Step("Const", Const(name, elaborated), decl.type_at(elaborated), (), st)
            case Star():
                return Step("I-I", t, Unit(), (), st)
            case TopUnit():
                return Step("Top-I", t, Top(), (), ResourceState(st.consumed, slack=True))
            case Tt():
                return Step("Two-I1", t, Two(), (), st)
            case Ff():
                return Step("Two-I2", t, Two(), (), st)
            case LetUnit(motive=motive, scrut=scrut, body=body):
                self.check_type(ctx, motive)
                ds, st1 = self._run(ctx, st, scrut, Unit())
                db, st2 = self._run(ctx, st1, body, motive)
                return Step("I-E", LetUnit(motive, ds.term, db.term), motive, (ds, db), st2)
            case TensorPair(left=left, right=right):
                dl, st1 = self._run(ctx, st, left, None)
                dr, st2 = self._run(ctx, st1, right, None)
                return Step("Tensor-I", TensorPair(dl.term, dr.term), Tensor(dl.ty, dr.ty), (dl, dr), st2)
            case LetTensor(motive=motive, scrut=scrut, x=x, y=y, body=body):
                self.check_type(ctx, motive)
                ds, st1 = self._run(ctx, st, scrut, None)
                pair = self._shape(ds.ty, Tensor, "the scrutinee", "Tensor-E")
                a = self._fresh(ctx, x)
                b = self._fresh(ctx, y, a)
                inner = ctx.with_lin(a, pair.left).with_lin(b, pair.right)
                opened = open_many(body, [LinVar(a), LinVar(b)])
                db, st2 = self._scoped(inner, st1, opened, (a, b), motive, "Tensor-E")
                term = LetTensor(motive, ds.term, x, y, close_many(db.term, [(a, Sort.LIN), (b, Sort.LIN)]))
                return Step("Tensor-E", term, motive, (ds, db), st2)
            case Lam(x=x, ty=dom, body=body):
                self.check_type(ctx, dom)
                return self._lam(ctx, st, x, dom, body, None, None)
            case App(fn=fn, arg=arg):
                df, st1 = self._run(ctx, st, fn, None)
                fn_ty = self._shape(df.ty, Lolli, "the applied term", "Lolli-E")
                da, st2 = self._run(ctx, st1, arg, fn_ty.dom)
                return Step("Lolli-E", App(df.term, da.term), fn_ty.cod, (df, da), st2)
            case Pair(left=left, right=right):
                dl, sl = self._run(ctx, st.reset_slack(), left, None)
                dr, sr = self._run(ctx, st.reset_slack(), right, None)
                return Step("With-I", Pair(dl.term, dr.term), With(dl.ty, dr.ty), (dl, dr), self._join(st, sl, sr, "With-I"))
            case Fst(pair=pair):
                d, st1 = self._run(ctx, st, pair, None)
                with_ty = self._shape(d.ty, With, "the projected term", "With-E1")
                return Step("With-E1", Fst(d.term), with_ty.left, (d,), st1)
            case Snd(pair=pair):
                d, st1 = self._run(ctx, st, pair, None)
                with_ty = self._shape(d.ty, With, "the projected term", "With-E2")
                return Step("With-E2", Snd(d.term), with_ty.right, (d,), st1)
            case Abort(motive=motive, scrut=scrut):
                self.check_type(ctx, motive)
                d, st1 = self._run(ctx, st, scrut, Zero())
                return Step("Zero-E", Abort(motive, d.term), motive, (d,), ResourceState(st1.consumed, slack=True))
            case Inl(other=other, term=inner):
                self.check_type(ctx, other)
                d, st1 = self._run(ctx, st, inner, None)
                return Step("Plus-I1", Inl(other, d.term), Plus(d.ty, other), (d,), st1)
            case Inr(other=other, term=inner):
                self.check_type(ctx, other)
                d, st1 = self._run(ctx, st, inner, None)
                return Step("Plus-I2", Inr(other, d.term), Plus(other, d.ty), (d,), st1)
            case Case(motive=motive, scrut=scrut, x=x, left=left, y=y, right=right):
                return self._case(ctx, st, t, motive, scrut, (x, left), (y, right))
            case BangIntro(term=inner):
                d = self._intuitionistic(ctx, inner, None)
                return Step("Bang-I", BangIntro(d.term), Bang(d.ty), (d,), st)
            case LetBang(motive=motive, scrut=scrut, x=x, body=body):
                self.check_type(ctx, motive)
                ds, st1 = self._run(ctx, st, scrut, None)
                bang = self._shape(ds.ty, Bang, "the scrutinee", "Bang-E")
                name = self._fresh(ctx, x)
                db, st2 = self._scoped(ctx.with_int(name, bang.ty), st1, open_many(body, [IntVar(name)]), (), motive, "Bang-E")
                term = LetBang(motive, ds.term, x, close_many(db.term, [(name, Sort.INT)]))
                return Step("Bang-E", term, motive, (ds, db), st2)
            case SigmaIntro(ann=ann):
                if ann is None:
                    raise self.error("cannot infer the type of a dependent pair; add a type ascription", "Sigma-I")
                self.check_type(ctx, ann)
                return self._check(ctx, st, t, ann)
            case LetSigma(motive=motive, scrut=scrut, x=x, y=y, body=body):
                self.check_type(ctx, motive)
                ds, st1 = self._run(ctx, st, scrut, None)
                sigma = self._shape(ds.ty, Sigma, "the scrutinee", "Sigma-E")
                a = self._fresh(ctx, x)
                b = self._fresh(ctx, y, a)
                inner = ctx.with_int(a, sigma.dom).with_lin(b, instantiate(sigma.cod, IntVar(a)))
                opened = open_many(body, [IntVar(a), LinVar(b)])
                db, st2 = self._scoped(inner, st1, opened, (b,), motive, "Sigma-E")
                term = LetSigma(motive, ds.term, x, y, close_many(db.term, [(a, Sort.INT), (b, Sort.LIN)]))
                return Step("Sigma-E", term, motive, (ds, db), st2)
            case PiLam(x=x, ty=dom, body=body):
                self.check_type(ctx, dom)
                name = self._fresh(ctx, x)
                d, out = self._scoped(ctx.with_int(name, dom), st, open_many(body, [IntVar(name)]), (), None, "Pi-I")
                ty = Pi(x, dom, close_many(d.ty, [(name, Sort.INT)]))
                return Step("Pi-I", PiLam(x, dom, close_many(d.term, [(name, Sort.INT)])), ty, (d,), out)
            case PiApp(fn=fn, arg=arg):
                df, st1 = self._run(ctx, st, fn, None)
                pi = self._shape(df.ty, Pi, "the applied term", "Pi-E")
                da = self._intuitionistic(ctx, arg, pi.dom)
                return Step("Pi-E", PiApp(df.term, da.term), instantiate(pi.cod, da.term), (df, da), st1)
            case Refl(term=inner):
                d = self._intuitionistic(ctx, inner, None)
                return Step("Id-I", Refl(d.term), Id(d.ty, d.term, d.term), (d,), st)
            case IdElim():
                return self._id_elim(ctx, st, t)
            case If(z=z, motive=motive, scrut=scrut, then=then, orelse=orelse):
                name = self._fresh(ctx, z)
                self.check_type(ctx.with_int(name, Two()), instantiate(motive, IntVar(name)))
                ds = self._intuitionistic(ctx, scrut, Two())
                dt, s1 = self._run(self._refine(ctx, ds.term, Tt()), st.reset_slack(), then, instantiate(motive, Tt()))
                df, s2 = self._run(self._refine(ctx, ds.term, Ff()), st.reset_slack(), orelse, instantiate(motive, Ff()))
                term = If(z, motive, ds.term, dt.term, df.term)
                return Step("Two-E", term, instantiate(motive, ds.term), (ds, dt, df), self._join(st, s1, s2, "Two-E"))
            case _:
                raise self.error(f"no typing rule applies to {type(t).__name__}", "Tm-Conv")

    def _refine(self, ctx: DualContext, scrut: Term, value: Term) -> DualContext:
        """A branch of an if on a variable sees the variable's value in the linear context."""
        return ctx.refine(scrut.name, value) if isinstance(scrut, IntVar) else ctx

    def _lin_var(self, ctx: DualContext, st: ResourceState, name: str) -> Step:
        if name in self._hidden:
            raise self.error(f"linear variable '{name}' cannot be used in an intuitionistic position", "Lin-Var")
        if (ty := ctx.lin_type(name)) is None:
            raise self.error(f"unknown linear variable '{name}'", "Lin-Var")
        if name in st.consumed:
            raise self.error(f"linear variable '{name}' is used more than once", "Lin-Var")
        return Step("Lin-Var", LinVar(name), ty, (), st.consume(name))

    def _case(
        self, ctx: DualContext, st: ResourceState, t: Term, motive: Ty, scrut: Term, left: tuple[str, Term], right: tuple[str, Term]
    ) -> Step:
        self.check_type(ctx, motive)
        ds, st1 = self._run(ctx, st, scrut, None)
        plus = self._shape(ds.ty, Plus, "the scrutinee", "Plus-E")
        branches: list[tuple[Derivation, ResourceState, str, Term]] = []
        for (hint, body), ty in ((left, plus.left), (right, plus.right)):
            name = self._fresh(ctx, hint)
            db, out = self._scoped(ctx.with_lin(name, ty), st1.reset_slack(), open_many(body, [LinVar(name)]), (name,), motive, "Plus-E")
            branches.append((db, out, name, close_many(db.term, [(name, Sort.LIN)])))
        (dl, sl, _, lterm), (dr, sr, _, rterm) = branches
        assert isinstance(t, Case)  # noqa: S101
        term = Case(motive, ds.term, t.x, lterm, t.y, rterm)
        return Step("Plus-E", term, motive, (ds, dl, dr), self._join(st1, sl, sr, "Plus-E"))

    def _id_elim(self, ctx: DualContext, st: ResourceState, t: IdElim) -> Step:
        da = self._intuitionistic(ctx, t.left, None)
        carrier = da.ty
        db = self._intuitionistic(ctx, t.right, carrier)
        x = self._fresh(ctx, t.x)
        x2 = self._fresh(ctx, t.x2, x)
        self.check_type(ctx.with_int(x, carrier).with_int(x2, carrier), instantiate(t.motive, IntVar(x), IntVar(x2)))
        dp, st1 = self._run(ctx, st, t.proof, Id(carrier, da.term, db.term))
        z = self._fresh(ctx, t.z)
        branch_ty = instantiate(t.motive, IntVar(z), IntVar(z))
        dd, st2 = self._scoped(ctx.with_int(z, carrier), st1, open_many(t.branch, [IntVar(z)]), (), branch_ty, "Id-E")
        term = IdElim(t.x, t.x2, t.motive, da.term, db.term, dp.term, t.z, close_many(dd.term, [(z, Sort.INT)]))
        return Step("Id-E", term, instantiate(t.motive, da.term, db.term), (da, db, dp, dd), st2)
