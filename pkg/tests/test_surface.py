import contextlib

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ildtt.core.modules.surface.lexer import tokenize
from ildtt.core.modules.surface.models import EqDirective, IsoDirective, ModeSpec
from ildtt.core.modules.surface.parser import parse_module, parse_term, parse_type
from ildtt.core.modules.surface.printer import print_module, print_term, print_type
from ildtt.core.modules.syntax.context import DualContext, LinEntry
from ildtt.core.modules.syntax.models import (
    App,
    Bang,
    BangIntro,
    BaseApp,
    Bound,
    IntVar,
    Lam,
    LinVar,
    Lolli,
    PiApp,
    Plus,
    SigmaIntro,
    Star,
    Tensor,
    TensorPair,
    With,
)
from ildtt.core.modules.syntax.ops import free_vars, subst_lin
from ildtt.errors import ParseError
from strategies import CTX, ENV, terms, types

A = BaseApp("A")
D = BaseApp("D")
E = BaseApp("E")


def test_tokens_and_positions():
    tokens = tokenize("a (x) b -- comment\n  <~> y'")
    assert [t.kind for t in tokens] == ["name", "(x)", "name", "<~>", "name", "eof"]
    assert (tokens[3].line, tokens[3].column) == (2, 3)
    assert tokens[4].text == "y'"


def test_bad_character_becomes_error_token():
    assert [t.kind for t in tokenize("a @ b")] == ["name", "error", "name", "eof"]


def test_module_declarations():
    result = parse_module("type A\ntype D\nconst c : D\ndef f {d : A ; w : D} : D := w\ncheck {; w : D} w : D\n")
    assert result.ok
    names = [decl.name for decl in result.module.decls]
    assert names == ["A", "D", "c", "f", "check@5"]


def test_context_entries_resolve_by_region():
    result = parse_module("type A\ntype D\ndef f {d : A ; w : D} : !A (x) D := (!d) (x) w\n")
    body = result.module.decls[2].body
    assert body == TensorPair(BangIntro(IntVar("d")), LinVar("w"))


def test_definitions_unfold_at_use():
    text = "type D\ndef idd : D -o D := \\v:D. v\ndef use {; w : D} : D := idd w\n"
    body = parse_module(text).module.decls[2].body
    assert body == App(Lam("v", D, Bound(0)), LinVar("w"))


def test_substitution_syntax():
    text = "type D\ndef k {; w : D} : D := w\ndef m {; e : D} : D := k[e/w]\n"
    assert parse_module(text).module.decls[2].body == LinVar("e")


def test_substitution_of_unknown_variable_fails():
    result = parse_module("type D\ndef k {; w : D} : D := w\ndef m {; e : D} : D := k[e/q]\n")
    assert not result.ok
    assert "not free" in result.diagnostics[0].message


def test_bare_bang_starts_a_dependent_pair():
    ctx = DualContext((("d", A),), (LinEntry("w", D),))
    assert parse_term("!d (x) w", ctx) == SigmaIntro(IntVar("d"), LinVar("w"))
    assert parse_term("(!d) (x) w", ctx) == TensorPair(BangIntro(IntVar("d")), LinVar("w"))


def test_bang_argument_is_dependent_application():
    ctx = DualContext((("d", A),), (LinEntry("f", D),))
    assert parse_term("f !d", ctx) == PiApp(LinVar("f"), IntVar("d"))
    assert parse_term("f (!d)", ctx) == App(LinVar("f"), BangIntro(IntVar("d")))


def test_type_precedence():
    env_text = "type D\ntype E\n"
    module = parse_module(env_text + "def f {; w : !D (x) E & D (+) E -o D} : I := *\n").module
    ty = module.decls[2].ctx.lin_region[0].ty
    assert ty == Lolli(Plus(With(Tensor(Bang(D), E), D), E), D)


def test_directive_modes():
    text = "type D\neq [ext=3, noeta] n {; w : D} : D := w == w\niso [ext] i : D <~> D := a. a ; b. b\n"
    eq, iso = parse_module(text).module.decls[1:]
    assert isinstance(eq, EqDirective)
    assert eq.mode == ModeSpec(eta=False, ext=True, fuel=3)
    assert isinstance(iso, IsoDirective)
    assert iso.mode == ModeSpec(ext=True)
    assert (iso.fwd_var, iso.fwd, iso.bwd_var, iso.bwd) == ("a", LinVar("a"), "b", LinVar("b"))


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("def f : I := q\n", "unknown name 'q'"),
        ("type A\ntype A\n", "already declared"),
        ("type D\neq [ext=0] n : I := * == *\n", "fuel must be at least 1"),
        ("type D\ndef f {; w : D} : D := let w be * in w\n", "'let' needs a motive"),
        ("def f : Q := *\n", "unknown type 'Q'"),
    ],
)
def test_parse_errors(text, message):
    result = parse_module(text)
    assert not result.ok
    assert message in result.diagnostics[0].message


def test_parse_recovers_at_next_declaration():
    result = parse_module("def f : I := q\ndef g : I := *\ndef h : I := r\n")
    assert [decl.name for decl in result.module.decls] == ["g"]
    assert [d.line for d in result.diagnostics] == [1, 3]


def test_parse_term_raises_on_error():
    with pytest.raises(ParseError):
        parse_term("let", DualContext())


def test_print_types():
    ty = Lolli(Tensor(D, E), D)
    assert print_type(ty) == "D (x) E -o D"
    assert print_type(ty, unicode=True) == "D ⊗ E ⊸ D"
    assert print_type(Tensor(D, Tensor(D, E))) == "D (x) (D (x) E)"
    assert print_type(Bang(With(D, E))) == "!(D & E)"


def test_print_terms():
    assert print_term(TensorPair(BangIntro(IntVar("d")), LinVar("w"))) == "(!d) (x) w"
    assert print_term(App(LinVar("f"), BangIntro(IntVar("d")))) == "f (!d)"
    assert print_term(Lam("v", D, App(LinVar("f"), Bound(0)))) == "\\v:D. f v"
    assert print_term(Lam("f", D, App(LinVar("f"), Bound(0)))) == "\\f1:D. f f1"


def test_module_prints_and_reparses():
    text = (
        "type A\ntype B (a : A)\nconst k (a : A) : B(a)\n"
        "def f {; y : Pi !a:A. B(a)} : !A -o Sg !a:A. B(a) := \\u:!A. let[Sg !a:A. B(a)] u be !a in !a (x) y !a\n"
        "eq [ext] e {; u : !A} : !A := u == u\n"
    )
    module = parse_module(text).module
    again = parse_module(print_module(module)).module
    assert again.decls == module.decls


@given(types)
def test_types_reparse(ty):
    assert parse_type(print_type(ty), CTX, ENV) == ty


@given(terms)
def test_terms_reparse(term):
    assert parse_term(print_term(term), CTX, ENV) == term


@given(terms, st.sampled_from([Star(), IntVar("d"), LinVar("u")]))
def test_postfix_substitution(term, value):
    text = f"({print_term(term)})[{print_term(value)}/w]"
    if "w" in free_vars(term)[1]:
        assert parse_term(text, CTX, ENV) == subst_lin(term, value, "w")
    else:
        with pytest.raises(ParseError, match="not free"):
            parse_term(text, CTX, ENV)


@given(st.one_of(st.text(), st.binary().map(lambda raw: raw.decode("utf-8", errors="replace"))))
def test_parser_only_raises_parse_errors(text):
    assert tokenize(text)[-1].kind == "eof"
    parse_module(text)
    for parse in (parse_term, parse_type):
        with contextlib.suppress(ParseError):
            parse(text, CTX, ENV)
