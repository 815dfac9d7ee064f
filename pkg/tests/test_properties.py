"""Metatheory checked on generated well-typed terms."""

import random
from collections import Counter
from dataclasses import fields, replace

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import CORPUS
from ildtt.core.modules.checker.rules import Checker
from ildtt.core.modules.corpus.manifest import load_manifest
from ildtt.core.modules.equality.engine import Engine
from ildtt.core.modules.model.gf2 import Gf2VectBackend
from ildtt.core.modules.model.interp import Env, Interpreter
from ildtt.core.modules.model.pointed import PointedSetBackend
from ildtt.core.modules.syntax.context import DualContext
from ildtt.core.modules.syntax.models import Node, Tt, Two
from ildtt.core.modules.syntax.ops import alpha_eq, free_vars, structural_key, subst_int, subst_lin
from strategies import INT_REGION, SIGNATURE, E, judgements, judgements_of, terms


def derive(ctx, term, ty):
    return Checker(SIGNATURE).derive(ctx, term, ty)


def rehint(node: Node) -> Node:
    """The same node with every binder hint renamed."""
    changes = {}
    for f in fields(node):
        value = getattr(node, f.name)
        if isinstance(value, Node):
            changes[f.name] = rehint(value)
        elif isinstance(value, tuple):
            changes[f.name] = tuple(rehint(v) if isinstance(v, Node) else v for v in value)
        elif isinstance(value, str) and not f.compare:
            changes[f.name] = value + "'"
    return replace(node, **changes)


@given(judgements())
def test_generated_judgements_check(j):
    d = derive(j.ctx, j.term, j.ty)
    assert d.ty == j.ty
    assert d.consumed_names() == {e.name for e in j.lins}


@given(st.data())
def test_substitution_lemma(data):
    j = data.draw(judgements())
    if not j.lins:
        return
    x = data.draw(st.sampled_from(j.lins))
    s = data.draw(judgements_of(x.ty))
    position = j.lins.index(x)
    lins = (*j.lins[:position], *s.lins, *j.lins[position + 1 :])
    substituted = subst_lin(j.term, s.term, x.name)
    assert derive(DualContext(INT_REGION, lins), substituted, j.ty).ty == j.ty

    ints, counts = free_vars(substituted)
    before_ints, before = free_vars(j.term)
    s_ints, s_counts = free_vars(s.term)
    assert counts == before - Counter({x.name: 1}) + s_counts
    assert ints == before_ints | s_ints


@given(terms)
def test_alpha_equivalence_is_an_equivalence(term):
    once, twice = rehint(term), rehint(rehint(term))
    assert alpha_eq(term, term)
    assert alpha_eq(term, once)
    assert alpha_eq(once, term)
    assert alpha_eq(once, twice)
    assert alpha_eq(term, twice)
    assert structural_key(term) == structural_key(once)


@given(terms, terms)
def test_alpha_equivalence_is_symmetric(t, u):
    assert alpha_eq(t, u) == alpha_eq(u, t)


@settings(max_examples=200)
@given(judgements())
def test_weakening(j):
    weakened = DualContext((*INT_REGION, ("k", E)), j.lins)
    assert derive(weakened, j.term, j.ty).ty == j.ty
    engine = Engine(SIGNATURE)
    assert engine.normalize(weakened, j.term).term == engine.normalize(j.ctx, j.term).term


@settings(max_examples=200)
@given(judgements(), st.randoms(use_true_random=False))
def test_exchange(j, rnd: random.Random):
    lins = list(j.lins)
    rnd.shuffle(lins)
    exchanged = DualContext(tuple(reversed(INT_REGION)), tuple(lins))
    assert derive(exchanged, j.term, j.ty).ty == j.ty


@settings(max_examples=200)
@given(judgements())
def test_intuitionistic_substitution(j):
    ctx = DualContext(INT_REGION[:1], j.lins)
    assert derive(ctx, subst_int(j.term, Tt(), "b"), j.ty).ty == j.ty


@settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
@given(judgements(max_depth=7))
def test_normalization_is_deterministic(j):
    engine = Engine(SIGNATURE)
    form = engine.normalize(j.ctx, j.term)
    assert Engine(SIGNATURE).normalize(j.ctx, j.term) == form
    assert form.steps <= engine.ceiling


@pytest.mark.parametrize("backend", [PointedSetBackend(), Gf2VectBackend()], ids=["pset", "gf2"])
@settings(max_examples=25, deadline=None)
@given(j=judgements(max_depth=2))
def test_model_reindexing(backend, j):
    """Substituting tt for b denotes the restriction of the family to the points where b is tt."""
    interp = Interpreter(SIGNATURE, backend, defaults=True)
    family = interp.interp_term(derive(j.ctx, j.term, j.ty))
    reindexed = interp.interp_term(derive(DualContext(INT_REGION[:1], j.lins), subst_int(j.term, Tt(), "b"), j.ty))
    tt = f"b={backend.show(interp.obj(Env(), Two()), interp.eval(Env(), Tt()))}"
    restricted = [m for env, m in family if env.label[-1] == tt]
    assert len(restricted) == len(reindexed)
    assert all(backend.same(f, g) for f, (_, g) in zip(restricted, reindexed, strict=True))


@pytest.mark.parametrize("file", load_manifest(CORPUS).files())
def test_corpus_derivations_replay(core, file):
    checked = core.services.checker.check_file(CORPUS / file)
    checker = core.services.checker.checker(checked.signature)
    derivations = [*checked.derivations.values()]
    for pair in (*checked.equations.values(), *checked.isos.values()):
        derivations.extend(pair)
    for d in derivations:
        checker.replay(d)
