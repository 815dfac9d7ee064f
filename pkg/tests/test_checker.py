import pytest

from ildtt.core.modules.checker.models import DeclVerdict, ResourceState
from ildtt.core.modules.checker.rules import Checker
from ildtt.core.modules.checker.typeof import type_of
from ildtt.core.modules.syntax.context import DualContext, LinEntry, Signature, TypeDecl
from ildtt.core.modules.syntax.models import BaseApp, Ff, LinVar, Tensor, TensorPair, Tt
from ildtt.errors import CheckError

PRELUDE = "type A\ntype C\ntype D\ntype E\ntype F (z : 2)\n"


def diagnostic_rule(checked, name):
    result = checked.report.get(name)
    assert result is not None
    assert result.verdict is DeclVerdict.ERROR, f"{name} was accepted"
    assert result.diagnostic is not None
    return result.diagnostic.rule


def test_accepts_and_records_rules(check):
    checked = check(PRELUDE + "def swap {; t : D (x) E} : E (x) D := let[E (x) D] t be a (x) b in b (x) a\n")
    assert checked.report.ok
    result = checked.report.get("swap")
    assert {"Ctx", "Ty-Form", "Tensor-E", "Tensor-I", "Lin-Var"} <= set(result.rules)
    d = checked.derivations["swap"]
    assert d.rule == "Tensor-E"
    assert [c.rule for c in d.children] == ["Lin-Var", "Tensor-I"]
    assert d.consumed_names() == frozenset({"t"})


def test_elaborated_term_has_the_derived_type(check):
    checked = check(PRELUDE + "def swap {; t : D (x) E} : E (x) D := let[E (x) D] t be a (x) b in b (x) a\n")
    d = checked.derivations["swap"]
    assert type_of(checked.signature, d.ctx, d.term) == d.ty


def test_failure_does_not_stop_the_module(check):
    checked = check(PRELUDE + "def bad {; w : D} : E := w\ndef good {; w : D} : D := w\n")
    assert [r.verdict for r in checked.report.results[5:]] == [DeclVerdict.ERROR, DeclVerdict.OK]
    assert not checked.report.ok
    diagnostic = checked.report.get("bad").diagnostic
    assert diagnostic.rule == "Lin-Var"
    assert "type mismatch" in diagnostic.message
    assert diagnostic.line == 6


@pytest.mark.parametrize(
    "source",
    [
        # top absorbs whatever is left
        "def t {; w : D, e : E} : D (x) Top := w (x) <>",
        # abort absorbs too
        "def t {; z : 0, w : D} : E := abort[E] z",
        # a branch with slack may consume less than its sibling
        "def t {; w : D, e : E} : (D (x) E) & Top := <w (x) e, <>>",
        # both components share the context
        "def t {; w : D} : D & D := <w, w>",
        # intuitionistic variables may be used any number of times
        "def t {d : A} : !A (x) !A (x) I := (!d) (x) (!d) (x) *",
        # conversion between types equal up to computation
        "def t {; w : F(ff)} : F(if[s. 2] tt then ff else tt) := w",
        # dependent elimination of 2 with a function-valued motive
        "def t {b : 2 ; w : D} : D := (if[s. D -o D] b then \\v:D. v else \\v:D. v) w",
    ],
)
def test_accepts(check, source):
    checked = check(PRELUDE + source + "\n")
    result = checked.report.get("t")
    assert result.verdict is DeclVerdict.OK, result.diagnostic


def test_conversion_is_recorded(check):
    checked = check(PRELUDE + "def t {; w : F(ff)} : F(if[s. 2] tt then ff else tt) := w\n")
    assert "Tm-Conv" in checked.report.get("t").rules


@pytest.mark.parametrize(
    ("source", "rule"),
    [
        ("def t {d : A ; d : D} : D := d", "Ctx"),
        ("def t {; w : D} : E := (w : D)", "Ann"),
        ("def t {; w : D, e : E} : D := w", "Lin-Var"),
        ("def t {; w : D} : D (x) D := w (x) w", "Lin-Var"),
        ("def t {; w : D} : !D := !w", "Lin-Var"),
        ("def t : D -o I := \\v:D. *", "Lolli-I"),
        ("def t {; w : D, e : E} : D & E := <w, e>", "With-I"),
        ("def t {; w : D} : I := fst w", "With-E1"),
        ("def t {; w : D} : I := snd w", "With-E2"),
        ("def t {b : 2 ; w : D, v : D} : D := if[s. D] b then w else v", "Two-E"),
        ("def t {d : A ; e : D} : I := let[I] !d (x) e be !a (x) y in *", "Sigma-I"),
        ("def t {d : A, e : A} : Id A (d, e) := refl !d", "Id-I"),
        ("def t {; w : D} : D := w !tt", "Pi-E"),
    ],
)
def test_rejects_with_rule(check, source, rule):
    checked = check(PRELUDE + source + "\n")
    assert diagnostic_rule(checked, "t") == rule


def test_linear_entry_may_not_shadow_an_intuitionistic_one(check):
    checked = check(PRELUDE + "def t {d : A ; d : D} : D := d\n")
    assert "duplicate name 'd'" in checked.report.get("t").diagnostic.message


def test_iso_witnesses_are_checked(check):
    checked = check(PRELUDE + "iso [ext] swap : D (x) E <~> E (x) D := s. let[E (x) D] s be a (x) b in b (x) a ; "
                    "t. let[D (x) E] t be b (x) a in a (x) b\n")
    result = checked.report.get("swap")
    assert result.verdict is DeclVerdict.TRUE
    assert "Iso" in result.rules
    fwd, bwd = checked.isos["swap"]
    assert fwd.ty == bwd.ctx.lin_region[0].ty


def test_checker_direct():
    sig = Signature().with_type(TypeDecl("D")).with_type(TypeDecl("E"))
    d, e = BaseApp("D"), BaseApp("E")
    ctx = DualContext((), (LinEntry("w", d), LinEntry("v", e)))
    checker = Checker(sig)
    derivation = checker.derive(ctx, TensorPair(LinVar("w"), LinVar("v")), Tensor(d, e))
    assert derivation.rules() == frozenset({"Tensor-I", "Lin-Var"})
    checker.replay(derivation)
    with pytest.raises(CheckError) as info:
        checker.derive(ctx, LinVar("w"), d)
    assert info.value.rule == "Lin-Var"


def test_resource_threading():
    checker = Checker(Signature().with_type(TypeDecl("D")))
    ctx = DualContext((), (LinEntry("w", BaseApp("D")),))
    _, out = checker.infer(ctx, ResourceState(), LinVar("w"))
    assert out.consumed == frozenset({"w"})
    with pytest.raises(CheckError):
        checker.infer(ctx, out, LinVar("w"))


REFINE = PRELUDE + "const c1 : F(tt) -o C\nconst d1 : F(ff) -o C\n"


def test_if_refines_the_linear_context(check):
    checked = check(REFINE + "def t {b : 2 ; w : F(b)} : C := if[s. C] b then c1 w else d1 w\n")
    result = checked.report.get("t")
    assert result.verdict is DeclVerdict.OK, result.diagnostic
    _, then, orelse = checked.derivations["t"].children
    assert then.ctx.lin_region[0].ty == BaseApp("F", (Tt(),))
    assert orelse.ctx.lin_region[0].ty == BaseApp("F", (Ff(),))


def test_if_on_another_variable_does_not_refine(check):
    checked = check(REFINE + "def t {b : 2, c : 2 ; w : F(b)} : C := if[s. C] c then c1 w else d1 w\n")
    assert diagnostic_rule(checked, "t") == "Lin-Var"


@pytest.mark.parametrize(
    ("source", "expected"),
    [
        ("def t {d : A, e : A} : !A := !d", {"Int-Weak"}),
        ("def t {d : A, e : A} : !A (x) !A := (!e) (x) (!d)", {"Int-Exch"}),
        ("def t {; a : D, b : E} : E (x) D := b (x) a", {"Lin-Exch"}),
        ("def t {; a : D, b : E} : D (x) E := a (x) b", set()),
        ("def t {b : 2} : 2 := if[s. 2] b then ff else tt", {"Int-Subst"}),
    ],
)
def test_structural_rules(check, source, expected):
    checked = check(PRELUDE + source + "\n")
    assert checked.derivations["t"].structural_rules() == expected
    assert expected <= set(checked.report.get("t").rules)


def test_equations_record_equality_rules(check):
    checked = check(PRELUDE + "eq same {; w : D} : D := w == w\neq beta {; w : D} : D := (\\v:D. v) w == w\n")
    assert {"Eq", "Tm-Eq-R"} <= set(checked.report.get("same").rules)
    assert "Tm-Eq-T" not in checked.report.get("same").rules
    assert {"Tm-Eq-R", "Tm-Eq-S", "Tm-Eq-T"} <= set(checked.report.get("beta").rules)
    assert "Lolli-C" in checked.report.rules_used()
