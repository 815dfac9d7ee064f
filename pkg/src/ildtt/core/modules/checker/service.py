from __future__ import annotations

import logging
from pathlib import Path

from ildtt.core.core import Service
from ildtt.core.modules.checker.models import CheckedModule, DeclResult, DeclVerdict, Derivation, ModuleReport
from ildtt.core.modules.checker.rules import Checker
from ildtt.core.modules.equality.models import Outcome, Verdict
from ildtt.core.modules.surface.models import (
    CheckDirective,
    ConstDeclaration,
    Declaration,
    DefDeclaration,
    Diagnostic,
    EqDirective,
    IsoDirective,
    SourceModule,
    TypeDeclaration,
    decl_kind,
)
from ildtt.core.modules.syntax.context import ConstDecl, DualContext, Signature, TypeDecl
from ildtt.core.modules.syntax.models import IntVar, LinVar, Term, Ty
from ildtt.core.modules.syntax.ops import open_many, subst_lin
from ildtt.errors import CheckError, NotFoundError, ValidationError

logger = logging.getLogger(__name__)

VERDICTS = {Verdict.TRUE: DeclVerdict.TRUE, Verdict.FALSE: DeclVerdict.FALSE, Verdict.UNDECIDED: DeclVerdict.UNDECIDED}


class CheckerService(Service):
    """Checks modules declaration by declaration, extending the signature as it goes."""

    def check_file(self, path: Path, signature: Signature | None = None) -> CheckedModule:
        return self.check_module(self.core.services.surface.load(path), signature)

    def check_module(self, module: SourceModule, signature: Signature | None = None) -> CheckedModule:
        """Check every declaration in order; a failing declaration does not stop the rest."""
        checked = CheckedModule(module, signature or Signature(), ModuleReport(path=module.path))
        for decl in module.decls:
            result = self._declaration(checked, decl)
            logger.debug("%s %s: %s", result.kind, result.name, result.verdict)
            checked.report.results.append(result)
        return checked

    def checker(self, signature: Signature, decl: Declaration | None = None) -> Checker:
        conversion = self.core.services.equality.engine(signature)
        return Checker(signature, conversion, decl.span if decl is not None else None)

    def _declaration(self, checked: CheckedModule, decl: Declaration) -> DeclResult:
        checker = self.checker(checked.signature, decl)
        kind = decl_kind(decl)
        try:
            verdict, trace = self._dispatch(checked, checker, decl)
        except CheckError as e:
            return DeclResult(name=decl.name, kind=kind, verdict=DeclVerdict.ERROR, diagnostic=e.diagnostic)
        except (NotFoundError, ValidationError) as e:
            diagnostic = Diagnostic(line=decl.span.line, column=decl.span.column, message=str(e))
            return DeclResult(name=decl.name, kind=kind, verdict=DeclVerdict.ERROR, diagnostic=diagnostic)
        diagnostic = None
        if verdict in (DeclVerdict.FALSE, DeclVerdict.UNDECIDED):
            what = "are not equal" if verdict is DeclVerdict.FALSE else "could not be decided equal"
            diagnostic = Diagnostic(line=decl.span.line, column=decl.span.column, message=f"the two sides {what}", rule=kind.title())
        return DeclResult(
            name=decl.name,
            kind=kind,
            verdict=verdict,
            diagnostic=diagnostic,
            rules=sorted(checker.rules_used),
            trace=[str(step) for step in trace],
        )

    def _dispatch(self, checked: CheckedModule, checker: Checker, decl: Declaration) -> tuple[DeclVerdict, tuple[str, ...]]:
        equality = self.core.services.equality
        match decl:
            case TypeDeclaration(name=name, params=params):
                self._telescope(checker, params)
                checked.signature = checked.signature.with_type(TypeDecl(name, params))
            case ConstDeclaration(name=name, params=params, ty=ty):
                ctx = self._telescope(checker, params)
                checker.check_type(ctx, open_many(ty, [IntVar(n) for n, _ in ctx.int_region]))
                checked.signature = checked.signature.with_const(ConstDecl(name, params, ty))
            case DefDeclaration(name=name, ctx=ctx, ty=ty, body=body) | CheckDirective(name=name, ctx=ctx, term=body, ty=ty):
                checked.derivations[name] = self._derive(checker, ctx, body, ty)
            case EqDirective(name=name, ctx=ctx, ty=ty, left=left, right=right, mode=mode):
                dl = self._derive(checker, ctx, left, ty)
                dr = self._derive(checker, ctx, right, ty)
                checked.equations[name] = (dl, dr)
                checker.rules_used.add("Eq")
                outcome = equality.equal(checked.signature, dl, dr, equality.mode(mode))
                checker.rules_used |= outcome.rules()
                return VERDICTS[outcome.verdict], outcome.trace
            case IsoDirective():
                outcome = self._iso(checked, checker, decl)
                checker.rules_used |= outcome.rules()
                return VERDICTS[outcome.verdict], outcome.trace
        return DeclVerdict.OK, ()

    def _telescope(self, checker: Checker, params: tuple[tuple[str, Ty], ...]) -> DualContext:
        """Each parameter type is closed over the parameters before it."""
        ctx = DualContext()
        for name, ty in params:
            opened = open_many(ty, [IntVar(n) for n, _ in ctx.int_region])
            checker.check_type(ctx, opened)
            ctx = ctx.with_int(name, opened)
        return ctx

    def _derive(self, checker: Checker, ctx: DualContext, term: Term, ty: Ty) -> Derivation:
        checker.check_context(ctx)
        checker.check_type(ctx, ty)
        d = checker.derive(ctx, term, ty)
        checker.rules_used |= d.structural_rules()
        return d

    def _iso(self, checked: CheckedModule, checker: Checker, decl: IsoDirective) -> Outcome:
        """Both witnesses, then both round trips, at the directive's mode."""
        equality = self.core.services.equality
        mode = equality.mode(decl.mode)
        checker.check_context(decl.ctx)
        checker.check_type(decl.ctx, decl.left_ty)
        checker.check_type(decl.ctx, decl.right_ty)
        fwd_ctx = decl.ctx.with_lin(decl.fwd_var, decl.left_ty)
        bwd_ctx = decl.ctx.with_lin(decl.bwd_var, decl.right_ty)
        fwd = checker.derive(fwd_ctx, decl.fwd, decl.right_ty)
        bwd = checker.derive(bwd_ctx, decl.bwd, decl.left_ty)
        checked.isos[decl.name] = (fwd, bwd)
        # The round trips compose the witnesses by linear substitution.
        checker.rules_used |= {"Iso", "Lin-Subst"} | fwd.structural_rules() | bwd.structural_rules()
        engine = equality.engine(checked.signature, mode)
        there_and_back = engine.equal(fwd_ctx, subst_lin(bwd.term, fwd.term, decl.bwd_var), LinVar(decl.fwd_var), decl.left_ty)
        back_and_there = engine.equal(bwd_ctx, subst_lin(fwd.term, bwd.term, decl.fwd_var), LinVar(decl.bwd_var), decl.right_ty)
        return Outcome(
            Verdict.all_of([there_and_back.verdict, back_and_there.verdict]),
            there_and_back.trace + back_and_there.trace,
            there_and_back.fuel_used + back_and_there.fuel_used,
        )
