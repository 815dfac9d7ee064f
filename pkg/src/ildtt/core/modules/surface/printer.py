"""Pretty-printer for types, terms and modules.

Output reparses to an alpha-equivalent tree. Bound variables get their hint names, made
fresh against every free name of the printed tree and every enclosing binder.
"""

from __future__ import annotations

from dataclasses import dataclass

from ildtt.core.modules.surface.lexer import KEYWORDS
from ildtt.core.modules.surface.models import (
    CheckDirective,
    ConstDeclaration,
    Declaration,
    DefDeclaration,
    EqDirective,
    IsoDirective,
    ModeSpec,
    SourceModule,
    TypeDeclaration,
)
from ildtt.core.modules.syntax.context import DualContext
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
    Node,
    Pair,
    Pi,
    PiApp,
    PiLam,
    Plus,
    Refl,
    Sigma,
    SigmaIntro,
    Snd,
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
from ildtt.core.modules.syntax.ops import all_names, children, fresh_name

ASCII = {"tensor": "(x)", "lolli": "-o", "plus": "(+)", "top": "Top", "sigma": "Sg", "pi": "Pi", "lam": "\\"}
UNICODE = {"tensor": "⊗", "lolli": "⊸", "plus": "⊕", "top": "⊤", "sigma": "Σ", "pi": "Π", "lam": "λ"}

# Term levels: binder forms < tensor < application < atom.
T_BINDER, T_TENSOR, T_APP, T_ATOM = range(4)
# Type levels: Sg/Pi < lolli < additive < tensor < bang < atom.
Y_DEP, Y_LOLLI, Y_ADD, Y_MUL, Y_BANG, Y_ATOM = range(6)


def _paren(text: str, level: int, required: int) -> str:
    return f"({text})" if level < required else text


@dataclass
class Printer:
    unicode: bool = False

    def sym(self, key: str) -> str:
        return (UNICODE if self.unicode else ASCII)[key]

    def bind(self, hint: str, names: list[str], avoid: frozenset[str]) -> str:
        if hint in KEYWORDS or not hint or not (hint[0].isalpha() or hint[0] == "_"):
            hint = "x"
        name = fresh_name(hint, avoid | frozenset(names))
        names.append(name)
        return name

    # Types

    def ty(self, t: Ty, names: list[str], avoid: frozenset[str], required: int = Y_DEP) -> str:
        text, level = self._ty(t, names, avoid)
        return _paren(text, level, required)

    def _ty(self, t: Ty, names: list[str], avoid: frozenset[str]) -> tuple[str, int]:
        match t:
            case Unit():
                return "I", Y_ATOM
            case Top():
                return self.sym("top"), Y_ATOM
            case Zero():
                return "0", Y_ATOM
            case Two():
                return "2", Y_ATOM
            case BaseApp(name=name, args=()):
                return name, Y_ATOM
            case BaseApp(name=name, args=args):
                inner = ", ".join(self.term(a, names, avoid) for a in args)
                return f"{name}({inner})", Y_ATOM
            case Id(ty=carrier, left=left, right=right):
                a = self.term(left, names, avoid)
                b = self.term(right, names, avoid)
                return f"Id {self.ty(carrier, names, avoid, Y_ATOM)} ({a}, {b})", Y_ATOM
            case Bang(ty=inner):
                return f"!{self.ty(inner, names, avoid, Y_BANG)}", Y_BANG
            case Tensor(left=left, right=right):
                a = self.ty(left, names, avoid, Y_MUL)
                b = self.ty(right, names, avoid, Y_BANG)
                return f"{a} {self.sym('tensor')} {b}", Y_MUL
            case Plus(left=left, right=right) | With(left=left, right=right):
                op = self.sym("plus") if isinstance(t, Plus) else "&"
                a = self.ty(left, names, avoid, Y_ADD)
                b = self.ty(right, names, avoid, Y_MUL)
                return f"{a} {op} {b}", Y_ADD
            case Lolli(dom=dom, cod=cod):
                a = self.ty(dom, names, avoid, Y_ADD)
                b = self.ty(cod, names, avoid, Y_DEP)
                return f"{a} {self.sym('lolli')} {b}", Y_LOLLI
            case Sigma(x=x, dom=dom, cod=cod) | Pi(x=x, dom=dom, cod=cod):
                former = self.sym("sigma") if isinstance(t, Sigma) else self.sym("pi")
                a = self.ty(dom, names, avoid)
                name = self.bind(x, names, avoid)
                b = self.ty(cod, names, avoid)
                names.pop()
                return f"{former} !{name}:{a}. {b}", Y_DEP
            case _:
                msg = f"cannot print type {t!r}"
                raise TypeError(msg)

    # Terms

    def term(self, t: Term, names: list[str], avoid: frozenset[str], required: int = T_BINDER) -> str:
        text, level = self._term(t, names, avoid)
        return _paren(text, level, required)

    def binder(self, hints: tuple[str, ...], body: Term, names: list[str], avoid: frozenset[str]) -> tuple[list[str], str]:
        chosen = [self.bind(h, names, avoid) for h in hints]
        text = self.term(body, names, avoid)
        del names[len(names) - len(hints) :]
        return chosen, text

    def _term(self, t: Term, names: list[str], avoid: frozenset[str]) -> tuple[str, int]:
        match t:
            case IntVar(name=name) | LinVar(name=name):
                return name, T_ATOM
            case Bound(index=index):
                return names[len(names) - 1 - index], T_ATOM
            case Const(name=name, args=()):
                return name, T_ATOM
            case Const(name=name, args=args):
                rendered = " ".join(f"!{self.term(a, names, avoid, T_ATOM)}" for a in args)
                return f"{name} {rendered}", T_APP
            case Star():
                return "*", T_ATOM
            case TopUnit():
                return "<>", T_ATOM
            case Tt():
                return "tt", T_ATOM
            case Ff():
                return "ff", T_ATOM
            case Pair(left=left, right=right):
                return f"<{self.term(left, names, avoid)}, {self.term(right, names, avoid)}>", T_ATOM
            case Ann(term=inner, ty=ty):
                return f"({self.term(inner, names, avoid)} : {self.ty(ty, names, avoid)})", T_ATOM
            case App(fn=fn, arg=arg) | PiApp(fn=fn, arg=arg):
                head = self.term(fn, names, avoid, T_APP)
                if isinstance(fn, BangIntro):
                    head = f"({head})"
                bang = "!" if isinstance(t, PiApp) else ""
                return f"{head} {bang}{self.term(arg, names, avoid, T_ATOM)}", T_APP
            case Fst(pair=inner) | Snd(pair=inner):
                word = "fst" if isinstance(t, Fst) else "snd"
                return f"{word} {self.term(inner, names, avoid, T_ATOM)}", T_APP
            case Inl(other=ty, term=inner) | Inr(other=ty, term=inner) | Abort(motive=ty, scrut=inner):
                word = {Inl: "inl", Inr: "inr", Abort: "abort"}[type(t)]
                return f"{word}[{self.ty(ty, names, avoid)}] {self.term(inner, names, avoid, T_ATOM)}", T_APP
            case Refl(term=inner):
                return f"refl !{self.term(inner, names, avoid, T_ATOM)}", T_APP
            case BangIntro(term=inner):
                return f"!{self.term(inner, names, avoid, T_ATOM)}", T_APP
            case SigmaIntro(witness=witness, body=body):
                w = self.term(witness, names, avoid, T_ATOM)
                return f"!{w} {self.sym('tensor')} {self.term(body, names, avoid, T_APP)}", T_TENSOR
            case TensorPair(left=left, right=right):
                a = self.term(left, names, avoid, T_TENSOR)
                if isinstance(left, BangIntro):
                    a = f"({a})"
                return f"{a} {self.sym('tensor')} {self.term(right, names, avoid, T_APP)}", T_TENSOR
            case Lam(x=x, ty=ty, body=body) | PiLam(x=x, ty=ty, body=body):
                bang = "!" if isinstance(t, PiLam) else ""
                dom = self.ty(ty, names, avoid)
                (name,), text = self.binder((x,), body, names, avoid)
                return f"{self.sym('lam')}{bang}{name}:{dom}. {text}", T_BINDER
            case LetUnit(motive=motive, scrut=scrut, body=body):
                head = self.let_head(motive, scrut, names, avoid)
                return f"{head} be * in {self.term(body, names, avoid)}", T_BINDER
            case LetTensor(motive=motive, scrut=scrut, x=x, y=y, body=body):
                head = self.let_head(motive, scrut, names, avoid)
                (a, b), text = self.binder((x, y), body, names, avoid)
                return f"{head} be {a} {self.sym('tensor')} {b} in {text}", T_BINDER
            case LetSigma(motive=motive, scrut=scrut, x=x, y=y, body=body):
                head = self.let_head(motive, scrut, names, avoid)
                (a, b), text = self.binder((x, y), body, names, avoid)
                return f"{head} be !{a} {self.sym('tensor')} {b} in {text}", T_BINDER
            case LetBang(motive=motive, scrut=scrut, x=x, body=body):
                head = self.let_head(motive, scrut, names, avoid)
                (a,), text = self.binder((x,), body, names, avoid)
                return f"{head} be !{a} in {text}", T_BINDER
            case Case(motive=motive, scrut=scrut, x=x, left=left, y=y, right=right):
                m = self.ty(motive, names, avoid)
                s = self.term(scrut, names, avoid)
                (a,), lhs = self.binder((x,), left, names, avoid)
                (b,), rhs = self.binder((y,), right, names, avoid)
                return f"case[{m}] {s} of inl {a} -> {lhs} | inr {b} -> {rhs}", T_BINDER
            case If(z=z, motive=motive, scrut=scrut, then=then, orelse=orelse):
                name = self.bind(z, names, avoid)
                m = self.ty(motive, names, avoid)
                names.pop()
                s = self.term(scrut, names, avoid)
                u = self.term(then, names, avoid)
                v = self.term(orelse, names, avoid)
                return f"if[{name}. {m}] {s} then {u} else {v}", T_BINDER
            case IdElim(x=x, x2=x2, motive=motive, left=left, right=right, proof=proof, z=z, branch=branch):
                a = self.bind(x, names, avoid)
                b = self.bind(x2, names, avoid)
                m = self.ty(motive, names, avoid)
                del names[-2:]
                ends = ", ".join(self.term(e, names, avoid) for e in (left, right, proof))
                (c,), text = self.binder((z,), branch, names, avoid)
                return f"idelim[{a}, {b}. {m}] ({ends}) with {c} -> {text}", T_BINDER
            case _:
                msg = f"cannot print term {t!r}"
                raise TypeError(msg)

    def let_head(self, motive: Ty, scrut: Term, names: list[str], avoid: frozenset[str]) -> str:
        return f"let[{self.ty(motive, names, avoid)}] {self.term(scrut, names, avoid)}"

    # Declarations

    def context(self, ctx: DualContext) -> str:
        if not ctx.int_region and not ctx.lin_region:
            return ""
        ints = ", ".join(f"{name} : {self.ty(ty, [], _avoid(ty))}" for name, ty in ctx.int_region)
        lins = ", ".join(f"{e.name} : {self.ty(e.ty, [], _avoid(e.ty))}" for e in ctx.lin_region)
        return f"{{{ints} ; {lins}}} " if lins else f"{{{ints}}} "

    def telescope(self, params: tuple[tuple[str, Ty], ...], names: list[str]) -> str:
        if not params:
            return ""
        parts = []
        for name, ty in params:
            parts.append(f"{name} : {self.ty(ty, names, frozenset())}")
            names.append(name)
        return f" ({', '.join(parts)})"

    def declaration(self, decl: Declaration) -> str:
        match decl:
            case TypeDeclaration(name=name, params=params):
                return f"type {name}{self.telescope(params, [])}"
            case ConstDeclaration(name=name, params=params, ty=ty):
                names: list[str] = []
                tele = self.telescope(params, names)
                return f"const {name}{tele} : {self.ty(ty, names, _avoid(ty))}"
            case DefDeclaration(name=name, ctx=ctx, ty=ty, body=body):
                return f"def {name} {self.context(ctx)}: {self.ty(ty, [], _avoid(ty))} := {self.term(body, [], _avoid(body))}"
            case CheckDirective(ctx=ctx, term=term, ty=ty):
                return f"check {self.context(ctx)}{self.term(term, [], _avoid(term))} : {self.ty(ty, [], _avoid(ty))}"
            case EqDirective(name=name, ctx=ctx, ty=ty, left=left, right=right, mode=mode):
                lhs = self.term(left, [], _avoid(left))
                rhs = self.term(right, [], _avoid(right))
                return f"eq {_mode(mode)}{name} {self.context(ctx)}: {self.ty(ty, [], _avoid(ty))} := {lhs} == {rhs}"
            case IsoDirective() as iso:
                left = self.ty(iso.left_ty, [], _avoid(iso.left_ty))
                right = self.ty(iso.right_ty, [], _avoid(iso.right_ty))
                fwd = self.term(iso.fwd, [], _avoid(iso.fwd))
                bwd = self.term(iso.bwd, [], _avoid(iso.bwd))
                return (
                    f"iso {_mode(iso.mode)}{iso.name} {self.context(iso.ctx)}: {left} <~> {right} "
                    f":= {iso.fwd_var}. {fwd} ; {iso.bwd_var}. {bwd}"
                )


def _avoid(node: Node) -> frozenset[str]:
    return all_names(node) | _const_names(node)


def _const_names(node: Node) -> frozenset[str]:
    found: set[str] = set()
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, Const):
            found.add(current.name)
        stack.extend(child for _, child in children(current))
    return frozenset(found)


def _mode(mode: ModeSpec) -> str:
    flags = []
    if mode.ext:
        flags.append(f"ext={mode.fuel}" if mode.fuel is not None else "ext")
    if mode.eta is False:
        flags.append("noeta")
    elif mode.eta is True:
        flags.append("eta")
    return f"[{', '.join(flags)}] " if flags else ""


def print_type(ty: Ty, *, unicode: bool = False) -> str:
    return Printer(unicode).ty(ty, [], _avoid(ty))


def print_term(term: Term, *, unicode: bool = False) -> str:
    return Printer(unicode).term(term, [], _avoid(term))


def print_module(module: SourceModule, *, unicode: bool = False) -> str:
    printer = Printer(unicode)
    return "".join(printer.declaration(decl) + "\n" for decl in module.decls)
