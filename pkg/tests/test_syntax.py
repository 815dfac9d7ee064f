from collections import Counter

import pytest

from ildtt.core.modules.syntax.context import ConstDecl, DualContext, LinEntry, Signature, TypeDecl, UsageFlag
from ildtt.core.modules.syntax.models import (
    BaseApp,
    Bound,
    If,
    IntVar,
    Lam,
    LinVar,
    Pair,
    Pi,
    Sigma,
    Sort,
    Star,
    TensorPair,
    Tt,
    Two,
    Unit,
)
from ildtt.core.modules.syntax.ops import (
    close_many,
    fresh_name,
    free_vars,
    instantiate,
    is_locally_closed,
    open_many,
    structural_key,
    subst_int,
    subst_lin,
)
from ildtt.errors import NotFoundError, ValidationError

D = BaseApp("D")


def test_binder_hints_do_not_affect_equality():
    assert Lam("a", Unit(), Bound(0)) == Lam("b", Unit(), Bound(0))
    assert Sigma("x", D, D) == Sigma("y", D, D)
    assert Lam("a", Unit(), Bound(0)) != Lam("a", D, Bound(0))


def test_close_then_open():
    pair = TensorPair(LinVar("u"), LinVar("v"))
    closed = close_many(pair, [("u", Sort.LIN), ("v", Sort.LIN)])
    assert closed == TensorPair(Bound(1), Bound(0))
    assert open_many(closed, [LinVar("a"), LinVar("b")]) == TensorPair(LinVar("a"), LinVar("b"))


def test_open_counts_enclosing_binders():
    body = Lam("x", Unit(), TensorPair(Bound(0), Bound(1)))
    assert open_many(body, [LinVar("w")]) == Lam("x", Unit(), TensorPair(Bound(0), LinVar("w")))


def test_close_respects_sort():
    t = TensorPair(IntVar("a"), LinVar("a"))
    assert close_many(t, [("a", Sort.LIN)]) == TensorPair(IntVar("a"), Bound(0))


def test_substitution():
    assert subst_lin(TensorPair(LinVar("u"), LinVar("v")), Star(), "u") == TensorPair(Star(), LinVar("v"))
    assert subst_int(BaseApp("B", (IntVar("d"),)), Tt(), "d") == BaseApp("B", (Tt(),))
    # linear substitution leaves intuitionistic occurrences alone
    assert subst_lin(IntVar("u"), Star(), "u") == IntVar("u")


def test_free_vars_multiplicative_positions_add_up():
    ints, lins = free_vars(TensorPair(LinVar("u"), TensorPair(LinVar("u"), IntVar("d"))))
    assert ints == frozenset({"d"})
    assert lins == Counter({"u": 2})


def test_free_vars_additive_alternatives_take_maximum():
    _, lins = free_vars(Pair(LinVar("u"), TensorPair(LinVar("u"), LinVar("v"))))
    assert lins == Counter({"u": 1, "v": 1})
    ints, lins = free_vars(If("z", Unit(), IntVar("b"), LinVar("w"), LinVar("w")))
    assert ints == frozenset({"b"})
    assert lins == Counter({"w": 1})


def test_locally_closed():
    assert not is_locally_closed(Bound(0))
    assert is_locally_closed(Lam("x", Unit(), Bound(0)))
    assert not is_locally_closed(Lam("x", Unit(), Bound(1)))


@pytest.mark.parametrize(
    ("hint", "taken", "expected"),
    [
        ("a", set(), "a"),
        ("a", {"a"}, "a1"),
        ("a", {"a", "a1"}, "a2"),
        ("a3", {"a3"}, "a1"),
        ("7", {"7"}, "x1"),
    ],
)
def test_fresh_name(hint, taken, expected):
    assert fresh_name(hint, taken) == expected


def test_instantiate_dependent_codomain():
    pi = Pi("z", Two(), BaseApp("F", (Bound(0),)))
    assert instantiate(pi.cod, Tt()) == BaseApp("F", (Tt(),))


def test_structural_key_is_hint_independent():
    assert structural_key(Lam("a", D, Bound(0))) == structural_key(Lam("b", D, Bound(0)))
    assert structural_key(LinVar("a")) != structural_key(IntVar("a"))


def test_dual_context_lookup():
    ctx = DualContext((("d", D), ("d", Unit())), (LinEntry("w", D, UsageFlag.CONSUMED),))
    assert ctx.int_type("d") == Unit()
    assert ctx.lin_type("w") == D
    assert ctx.lin_type("d") is None
    assert ctx.names() == frozenset({"d", "w"})
    assert ctx.consumed() == (LinEntry("w", D, UsageFlag.CONSUMED),)
    assert ctx.fresh().lin_region == (LinEntry("w", D),)


def test_signature_rejects_redeclaration():
    sig = Signature().with_type(TypeDecl("D"))
    with pytest.raises(ValidationError):
        sig.with_type(TypeDecl("D"))
    with pytest.raises(ValidationError):
        sig.with_const(ConstDecl("D", (), D))


def test_signature_lookup_missing():
    with pytest.raises(NotFoundError):
        Signature().type_decl("D")
    with pytest.raises(NotFoundError):
        Signature().const_decl("c")


def test_const_type_at_arguments():
    decl = ConstDecl("k", (("z", Two()),), BaseApp("F", (Bound(0),)))
    assert decl.type_at((Tt(),)) == BaseApp("F", (Tt(),))
