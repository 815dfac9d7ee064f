"""Recursive-descent parser for the `.ildtt` surface language.

Names resolve innermost-first: local binders become `Bound` indices, declaration context
entries become `IntVar`/`LinVar`, then term constants, then earlier definitions, which
are unfolded to their bodies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ildtt.core.modules.surface.lexer import DECL_KEYWORDS, Token, tokenize
from ildtt.core.modules.surface.models import (
    CheckDirective,
    ConstDeclaration,
    Declaration,
    DefDeclaration,
    Diagnostic,
    EqDirective,
    IsoDirective,
    ModeSpec,
    SourceModule,
    Span,
    TypeDeclaration,
)
from ildtt.core.modules.syntax.context import DualContext, LinEntry
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
from ildtt.core.modules.syntax.ops import free_vars, is_locally_closed, subst_int, subst_lin
from ildtt.errors import ParseError

logger = logging.getLogger(__name__)

ATOM_START = frozenset({"name", "*", "<>", "<", "tt", "ff", "(", "(x)"})


class _Failure(Exception):
    def __init__(self, diagnostic: Diagnostic) -> None:
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


@dataclass
class Environment:
    """Names declared so far in a module."""

    type_arity: dict[str, int] = field(default_factory=dict)
    const_arity: dict[str, int] = field(default_factory=dict)
    defs: dict[str, Term] = field(default_factory=dict)
    taken: set[str] = field(default_factory=set)


@dataclass
class ParseResult:
    module: SourceModule
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


class Parser:
    def __init__(self, text: str, env: Environment | None = None) -> None:
        self.tokens = tokenize(text)
        self.pos = 0
        self.env = env or Environment()
        # Local binders, innermost last.
        self.scope: list[str] = []
        self.ctx_ints: set[str] = set()
        self.ctx_lins: set[str] = set()

    # Token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tok
        if token.kind != "eof":
            self.pos += 1
        return token

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def accept(self, kind: str) -> Token | None:
        return self.advance() if self.tok.kind == kind else None

    def fail(self, message: str, token: Token | None = None, rule: str | None = None) -> _Failure:
        token = token or self.tok
        if token.kind == "error":
            message = f"unexpected character {token.text!r}"
        return _Failure(Diagnostic(line=token.line, column=token.column, message=message, rule=rule))

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.fail(f"expected {what or repr(kind)}, found {found!r}")
        return self.advance()

    def name(self) -> str:
        return self.expect("name", "a name").text

    # Module

    def parse_module(self, path: str | None = None) -> ParseResult:
        decls: list[Declaration] = []
        diagnostics: list[Diagnostic] = []
        while not self.at("eof"):
            start = self.tok
            try:
                decl = self.declaration()
            except _Failure as failure:
                diagnostics.append(failure.diagnostic)
                self.recover(start)
                continue
            decls.append(decl)
        logger.debug("parsed %d declarations with %d diagnostics", len(decls), len(diagnostics))
        return ParseResult(SourceModule(tuple(decls), path), diagnostics)

    def recover(self, start: Token) -> None:
        if self.tok is start:
            self.advance()
        while not self.at("eof") and self.tok.kind not in DECL_KEYWORDS:
            self.advance()

    def declaration(self) -> Declaration:
        token = self.tok
        span = Span(token.line, token.column)
        self.scope, self.ctx_ints, self.ctx_lins = [], set(), set()
        match token.kind:
            case "type":
                self.advance()
                name = self.fresh_decl_name()
                params = self.telescope()
                self.env.type_arity[name] = len(params)
                return TypeDeclaration(name, params, span)
            case "const":
                self.advance()
                name = self.fresh_decl_name()
                params = self.telescope(keep_scope=True)
                self.expect(":")
                ty = self.ty()
                self.env.const_arity[name] = len(params)
                return ConstDeclaration(name, params, ty, span)
            case "def":
                self.advance()
                name = self.fresh_decl_name()
                ctx = self.context()
                self.expect(":")
                ty = self.ty()
                self.expect(":=")
                body = self.term()
                self.env.defs[name] = body
                return DefDeclaration(name, ctx, ty, body, span)
            case "check":
                self.advance()
                name = f"check@{token.line}"
                self.claim(name, token)
                ctx = self.context()
                term = self.term()
                self.expect(":")
                return CheckDirective(name, ctx, term, self.ty(), span)
            case "eq":
                self.advance()
                mode = self.mode()
                name = self.fresh_decl_name()
                ctx = self.context()
                self.expect(":")
                ty = self.ty()
                self.expect(":=")
                left = self.term()
                self.expect("==")
                return EqDirective(name, ctx, ty, left, self.term(), mode, span)
            case "iso":
                self.advance()
                return self.iso(span)
            case _:
                raise self.fail("expected a declaration (type, const, def, check, eq, iso)")

    def iso(self, span: Span) -> IsoDirective:
        mode = self.mode()
        name = self.fresh_decl_name()
        ctx = self.context()
        self.expect(":")
        left_ty = self.ty()
        self.expect("<~>")
        right_ty = self.ty()
        self.expect(":=")
        fwd_var, fwd = self.witness(ctx)
        self.expect(";")
        bwd_var, bwd = self.witness(ctx)
        return IsoDirective(name, ctx, left_ty, right_ty, fwd_var, fwd, bwd_var, bwd, mode, span)

    def witness(self, ctx: DualContext) -> tuple[str, Term]:
        var = self.name()
        self.expect(".")
        self.ctx_lins = {e.name for e in ctx.lin_region} | {var}
        return var, self.term()

    def fresh_decl_name(self) -> str:
        token = self.expect("name", "a declaration name")
        self.claim(token.text, token)
        return token.text

    def claim(self, name: str, token: Token) -> None:
        if name in self.env.taken:
            raise self.fail(f"name '{name}' is already declared", token)
        self.env.taken.add(name)

    def telescope(self, keep_scope: bool = False) -> tuple[tuple[str, Ty], ...]:
        params: list[tuple[str, Ty]] = []
        if self.accept("("):
            while True:
                name = self.name()
                self.expect(":")
                params.append((name, self.ty()))
                self.scope.append(name)
                if not self.accept(","):
                    break
            self.expect(")")
        if not keep_scope:
            self.scope = []
        return tuple(params)

    def context(self) -> DualContext:
        ints: list[tuple[str, Ty]] = []
        lins: list[LinEntry] = []
        if not self.accept("{"):
            return DualContext()
        if not self.at(";", "}"):
            ints.extend(self.bindings(self.ctx_ints))
        if self.accept(";") and not self.at("}"):
            lins.extend(LinEntry(name, ty) for name, ty in self.bindings(self.ctx_lins))
        self.expect("}")
        return DualContext(tuple(ints), tuple(lins))

    def bindings(self, names: set[str]) -> list[tuple[str, Ty]]:
        """Entries join `names` one at a time so later types may mention earlier entries."""
        result: list[tuple[str, Ty]] = []
        while True:
            name = self.name()
            self.expect(":")
            result.append((name, self.ty()))
            names.add(name)
            if not self.accept(","):
                return result

    def mode(self) -> ModeSpec:
        eta: bool | None = None
        ext: bool | None = None
        fuel: int | None = None
        if not self.accept("["):
            return ModeSpec()
        while True:
            token = self.expect("name", "a mode flag (ext, noeta, eta)")
            match token.text:
                case "ext":
                    ext = True
                    if self.accept("="):
                        fuel = int(self.expect("number", "a fuel amount").text)
                        if fuel < 1:
                            raise self.fail("fuel must be at least 1", token)
                case "noeta":
                    eta = False
                case "eta":
                    eta = True
                case _:
                    raise self.fail(f"unknown mode flag '{token.text}'", token)
            if not self.accept(","):
                break
        self.expect("]")
        return ModeSpec(eta, ext, fuel)

    # Scoped helpers

    def bind(self, *names: str) -> None:
        self.scope.extend(names)

    def unbind(self, count: int) -> None:
        del self.scope[len(self.scope) - count :]

    def resolve(self, token: Token) -> Term:
        name = token.text
        for depth, bound in enumerate(reversed(self.scope)):
            if bound == name:
                return Bound(depth)
        if name in self.ctx_lins:
            return LinVar(name)
        if name in self.ctx_ints:
            return IntVar(name)
        if name in self.env.const_arity:
            args = tuple(self.bang_atom() for _ in range(self.env.const_arity[name]))
            return Const(name, args)
        if name in self.env.defs:
            return self.env.defs[name]
        raise self.fail(f"unknown name '{name}'", token)

    def bang_atom(self) -> Term:
        self.expect("!", "'!' before a constant argument")
        return self.atom()

    # Types

    def ty(self) -> Ty:
        if self.at("Sg", "Pi"):
            former = self.advance().kind
            self.expect("!")
            x = self.name()
            self.expect(":")
            dom = self.ty()
            self.expect(".")
            self.bind(x)
            cod = self.ty()
            self.unbind(1)
            return Sigma(x, dom, cod) if former == "Sg" else Pi(x, dom, cod)
        left = self.ty_add()
        if self.accept("-o"):
            return Lolli(left, self.ty())
        return left

    def ty_add(self) -> Ty:
        left = self.ty_mul()
        while self.at("(+)", "&"):
            op = self.advance().kind
            right = self.ty_mul()
            left = Plus(left, right) if op == "(+)" else With(left, right)
        return left

    def ty_mul(self) -> Ty:
        left = self.ty_unary()
        while self.accept("(x)"):
            left = Tensor(left, self.ty_unary())
        return left

    def ty_unary(self) -> Ty:
        if self.accept("!"):
            return Bang(self.ty_unary())
        return self.ty_atom()

    def ty_atom(self) -> Ty:
        token = self.tok
        match token.kind:
            case "I":
                self.advance()
                return Unit()
            case "Top":
                self.advance()
                return Top()
            case "number" if token.text == "0":
                self.advance()
                return Zero()
            case "number" if token.text == "2":
                self.advance()
                return Two()
            case "Id":
                self.advance()
                carrier = self.ty_atom()
                self.expect("(")
                left = self.term()
                self.expect(",")
                right = self.term()
                self.expect(")")
                return Id(carrier, left, right)
            case "name":
                self.advance()
                return self.base_app(token)
            case "(":
                self.advance()
                inner = self.ty()
                self.expect(")")
                return inner
            case _:
                raise self.fail(f"expected a type, found {token.text or 'end of input'!r}")

    def base_app(self, token: Token) -> Ty:
        arity = self.env.type_arity.get(token.text)
        if arity is None:
            raise self.fail(f"unknown type '{token.text}'", token, rule="Ty-Form")
        if arity == 0:
            return BaseApp(token.text)
        paren = self.tok
        if arity == 1 and paren.kind == "(x)":
            # `B(x)`: the tensor token doubles as a one-variable argument list.
            self.advance()
            return BaseApp(token.text, (self.resolve(Token("name", "x", paren.line, paren.column + 1)),))
        self.expect("(", f"{arity} argument(s) for '{token.text}'")
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        if len(args) != arity:
            raise self.fail(f"'{token.text}' takes {arity} argument(s), got {len(args)}", token, rule="Ty-Form")
        return BaseApp(token.text, tuple(args))

    # Terms

    def term(self) -> Term:
        token = self.tok
        match token.kind:
            case "\\":
                return self.lam()
            case "let":
                return self.let()
            case "case":
                return self.case()
            case "if":
                return self.if_()
            case "idelim":
                return self.idelim()
            case _:
                return self.tensor()

    def motive(self, keyword: str) -> Ty:
        if not self.at("["):
            raise self.fail(f"'{keyword}' needs a motive annotation '[type]'", rule="Motive")
        self.advance()
        ty = self.ty()
        self.expect("]")
        return ty

    def lam(self) -> Term:
        self.expect("\\")
        dependent = self.accept("!") is not None
        x = self.name()
        self.expect(":")
        ty = self.ty()
        self.expect(".")
        self.bind(x)
        body = self.term()
        self.unbind(1)
        return PiLam(x, ty, body) if dependent else Lam(x, ty, body)

    def let(self) -> Term:
        self.expect("let")
        motive = self.motive("let")
        scrut = self.term()
        self.expect("be")
        if self.accept("*"):
            self.expect("in")
            return LetUnit(motive, scrut, self.term())
        if self.accept("!"):
            x = self.name()
            if self.accept("(x)"):
                y = self.name()
                self.expect("in")
                self.bind(x, y)
                body = self.term()
                self.unbind(2)
                return LetSigma(motive, scrut, x, y, body)
            self.expect("in")
            self.bind(x)
            body = self.term()
            self.unbind(1)
            return LetBang(motive, scrut, x, body)
        x = self.name()
        self.expect("(x)", "'(x)' in a tensor pattern")
        y = self.name()
        self.expect("in")
        self.bind(x, y)
        body = self.term()
        self.unbind(2)
        return LetTensor(motive, scrut, x, y, body)

    def case(self) -> Term:
        self.expect("case")
        motive = self.motive("case")
        scrut = self.term()
        self.expect("of")
        self.expect("inl")
        x = self.name()
        self.expect("->")
        self.bind(x)
        left = self.term()
        self.unbind(1)
        self.expect("|")
        self.expect("inr")
        y = self.name()
        self.expect("->")
        self.bind(y)
        right = self.term()
        self.unbind(1)
        return Case(motive, scrut, x, left, y, right)

    def if_(self) -> Term:
        self.expect("if")
        if not self.at("["):
            raise self.fail("'if' needs a motive annotation '[z.type]'", rule="Motive")
        self.advance()
        z = self.name()
        self.expect(".")
        self.bind(z)
        motive = self.ty()
        self.unbind(1)
        self.expect("]")
        scrut = self.term()
        self.expect("then")
        then = self.term()
        self.expect("else")
        return If(z, motive, scrut, then, self.term())

    def idelim(self) -> Term:
        self.expect("idelim")
        if not self.at("["):
            raise self.fail("'idelim' needs a motive annotation '[x, x'.type]'", rule="Motive")
        self.advance()
        x = self.name()
        self.expect(",")
        x2 = self.name()
        self.expect(".")
        self.bind(x, x2)
        motive = self.ty()
        self.unbind(2)
        self.expect("]")
        self.expect("(")
        left = self.term()
        self.expect(",")
        right = self.term()
        self.expect(",")
        proof = self.term()
        self.expect(")")
        self.expect("with")
        z = self.name()
        self.expect("->")
        self.bind(z)
        branch = self.term()
        self.unbind(1)
        return IdElim(x, x2, motive, left, right, proof, z, branch)

    def tensor(self) -> Term:
        bare_bang = self.at("!")
        left = self.app()
        if bare_bang and isinstance(left, BangIntro) and self.accept("(x)"):
            left = SigmaIntro(left.term, self.app())
        while self.accept("(x)"):
            left = TensorPair(left, self.app())
        return left

    def app(self) -> Term:
        token = self.tok
        match token.kind:
            case "!":
                self.advance()
                return BangIntro(self.atom())
            case "fst":
                self.advance()
                head: Term = Fst(self.atom())
            case "snd":
                self.advance()
                head = Snd(self.atom())
            case "inl" | "inr" | "abort":
                self.advance()
                self.expect("[", f"'[type]' after '{token.kind}'")
                ty = self.ty()
                self.expect("]")
                arg = self.atom()
                head = Inl(ty, arg) if token.kind == "inl" else Inr(ty, arg) if token.kind == "inr" else Abort(ty, arg)
            case "refl":
                self.advance()
                self.expect("!", "'!' after 'refl'")
                head = Refl(self.atom())
            case _:
                head = self.atom()
        while self.tok.kind in ATOM_START - {"(x)"} or self.at("!"):
            if self.accept("!"):
                head = PiApp(head, self.atom())
            else:
                head = App(head, self.atom())
        return head

    def atom(self) -> Term:
        token = self.tok
        match token.kind:
            case "name":
                self.advance()
                result = self.resolve(token)
            case "(x)":
                self.advance()
                result = self.resolve(Token("name", "x", token.line, token.column + 1))
            case "*":
                self.advance()
                result = Star()
            case "<>":
                self.advance()
                result = TopUnit()
            case "tt":
                self.advance()
                result = Tt()
            case "ff":
                self.advance()
                result = Ff()
            case "<":
                self.advance()
                left = self.term()
                self.expect(",")
                right = self.term()
                self.expect(">")
                result = Pair(left, right)
            case "(":
                self.advance()
                inner = self.term()
                if self.accept(":"):
                    inner = Ann(inner, self.ty())
                self.expect(")")
                result = inner
            case _:
                raise self.fail(f"expected a term, found {token.text or 'end of input'!r}")
        while self.at("["):
            result = self.substitution(result)
        return result

    def substitution(self, target: Term) -> Term:
        start = self.expect("[")
        value = self.term()
        self.expect("/")
        token = self.expect("name", "the substituted variable")
        self.expect("]")
        if not is_locally_closed(value):
            raise self.fail("a substituted term may not mention locally bound variables", start)
        ints, lins = free_vars(target)
        if token.text in lins:
            return subst_lin(target, value, token.text)
        if token.text in ints:
            return subst_int(target, value, token.text)
        raise self.fail(f"'{token.text}' is not free in the term being substituted into", token)


def parse_module(text: str, path: str | None = None) -> ParseResult:
    """Parse a whole module, collecting one diagnostic per failed declaration."""
    return Parser(text).parse_module(path)


def parse_term(text: str, ctx: DualContext | None = None, env: Environment | None = None) -> Term:
    """Parse a single term whose free names come from `ctx`; raises on the first error."""
    parser = _fragment_parser(text, ctx, env)
    try:
        result = parser.term()
        parser.expect("eof", "end of input")
    except _Failure as failure:
        raise ParseError([failure.diagnostic]) from None
    return result


def parse_type(text: str, ctx: DualContext | None = None, env: Environment | None = None) -> Ty:
    parser = _fragment_parser(text, ctx, env)
    try:
        result = parser.ty()
        parser.expect("eof", "end of input")
    except _Failure as failure:
        raise ParseError([failure.diagnostic]) from None
    return result


def _fragment_parser(text: str, ctx: DualContext | None, env: Environment | None) -> Parser:
    parser = Parser(text, env)
    if ctx is not None:
        parser.ctx_ints = {name for name, _ in ctx.int_region}
        parser.ctx_lins = {e.name for e in ctx.lin_region}
    return parser
