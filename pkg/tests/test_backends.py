import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ildtt.core.modules.model.backends import Morphism
from ildtt.core.modules.model.gf2 import Gf2VectBackend, rank
from ildtt.core.modules.model.interp import bang_size_law
from ildtt.core.modules.model.pointed import PointedSetBackend
from ildtt.errors import ModelError

PSET = PointedSetBackend()
GF2 = Gf2VectBackend()


def test_pointed_sizes():
    g = PSET.gens_of_size(3)
    assert g == 2
    assert PSET.size(g) == 3
    assert PSET.points(g) == [0, 1, 2]
    # smash product: non-basepoints multiply
    assert PSET.size(PSET.tensor(2, 3)) == 7
    assert PSET.size(PSET.product([2, 1])) == 6
    assert PSET.size(PSET.coproduct([2, 1])) == 4


def test_vector_sizes():
    assert GF2.gens_of_size(2) == 2
    assert GF2.size(GF2.tensor(2, 3)) == 6
    assert GF2.size(GF2.product([2, 1])) == 3
    assert GF2.count_points(3) == 8


@pytest.mark.parametrize("backend", [PSET, GF2], ids=["pset", "gf2"])
@pytest.mark.parametrize("g", [0, 1, 2, 3])
def test_bang_size_law(backend, g):
    observed, expected = bang_size_law(backend, g)
    assert observed == expected


@pytest.mark.parametrize("backend", [PSET, GF2], ids=["pset", "gf2"])
@pytest.mark.parametrize(("a", "b"), [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_hom_points_are_morphisms(backend, a, b):
    assert backend.count_points(backend.hom(a, b)) == len(backend.all_morphisms(a, b))


@pytest.mark.parametrize("backend", [PSET, GF2], ids=["pset", "gf2"])
def test_curry_names_the_morphism(backend):
    for f in backend.all_morphisms(2, 2):
        name = backend.curry(2, 2, f.images)
        assert all(backend.equal(x, y) for x, y in zip(backend.uncurry(2, 2, name), f.images, strict=True))


def test_pointed_sum_of_distinct_points():
    assert PSET.add(2, [0, 2, 0]) == 2
    with pytest.raises(ModelError, match="no sum of two distinct points"):
        PSET.add(2, [1, 2])


def test_vector_sum_cancels():
    v = GF2.gen(2, 0)
    assert GF2.equal(GF2.add(2, [v, v]), GF2.zero(2))


def test_rank():
    assert rank(np.array([[1, 1], [1, 1]], dtype=np.uint8)) == 1
    assert rank(np.eye(3, dtype=np.uint8)) == 3
    assert rank(np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)) == 2


def test_isomorphisms():
    assert PSET.is_iso(Morphism(2, 2, (2, 1)))
    assert not PSET.is_iso(Morphism(2, 2, (1, 1)))
    assert not PSET.is_iso(Morphism(2, 2, (1, 0)))
    shear = GF2.morphism(2, 2, lambda i: GF2.from_coords(2, [0, 1] if i == 0 else [1]))
    assert GF2.is_iso(shear)
    collapse = GF2.morphism(2, 2, lambda _: GF2.from_coords(2, [0, 1]))
    assert not GF2.is_iso(collapse)


@pytest.mark.parametrize("backend", [PSET, GF2], ids=["pset", "gf2"])
def test_swap_composes_to_identity(backend):
    swap = backend.morphism(2, 2, lambda i: backend.gen(2, 1 - i))
    assert backend.same(backend.compose(swap, swap), backend.identity(2))
    assert backend.same(backend.tensor_maps(backend.identity(2), backend.identity(3)), backend.identity(6))


def test_compose_checks_objects():
    with pytest.raises(ModelError, match="mismatched"):
        GF2.compose(GF2.identity(2), GF2.identity(3))


@pytest.mark.parametrize("backend", [PSET, GF2], ids=["pset", "gf2"])
def test_tensor_split(backend):
    v = backend.pair(2, 3, backend.gen(2, 1), backend.gen(3, 2))
    [(x, y)] = backend.split(2, 3, v)
    assert backend.equal(x, backend.gen(2, 1))
    assert backend.equal(y, backend.gen(3, 2))


def test_coproduct_cases():
    v = GF2.add(3, [GF2.inject([1, 2], 0, GF2.gen(1, 0)), GF2.inject([1, 2], 1, GF2.gen(2, 1))])
    assert [k for k, _ in GF2.cases([1, 2], v)] == [0, 1]
    assert PSET.cases([1, 2], PSET.inject([1, 2], 1, 2)) == [(1, 2)]


def test_points_are_read_and_shown():
    v = GF2.parse_point(2, "01")
    assert GF2.show(2, v) == "01"
    assert GF2.show(0, GF2.parse_point(0, "-")) == "-"
    assert PSET.parse_point(2, "2") == 2
    assert GF2.point_index(2, v) == 2


@pytest.mark.parametrize(
    ("backend", "g", "text"),
    [(PSET, 2, "3"), (PSET, 2, "a"), (GF2, 2, "012"), (GF2, 2, "1")],
)
def test_unreadable_points(backend, g, text):
    with pytest.raises(ModelError, match="is not a"):
        backend.parse_point(g, text)


def test_pointed_set_needs_a_basepoint():
    with pytest.raises(ModelError, match="basepoint"):
        PSET.gens_of_size(0)


small = st.integers(min_value=0, max_value=3)


@given(small, small, small)
def test_monoidal_laws(a, b, c):
    for backend in (PSET, GF2):
        assert backend.tensor(backend.tensor(a, b), c) == backend.tensor(a, backend.tensor(b, c))
        assert backend.tensor(a, backend.unit()) == a
        assert backend.tensor(a, backend.coproduct([b, c])) == backend.coproduct([backend.tensor(a, b), backend.tensor(a, c)])
        assert backend.tensor(a, backend.initial()) == backend.initial()


@given(st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=2))
def test_tensor_is_functorial(a, b):
    for backend in (PSET, GF2):
        swap_a = backend.morphism(a, a, lambda i, a=a, backend=backend: backend.gen(a, a - 1 - i))
        swap_b = backend.morphism(b, b, lambda i, b=b, backend=backend: backend.gen(b, b - 1 - i))
        both = backend.tensor_maps(swap_a, swap_b)
        squares = backend.tensor_maps(backend.compose(swap_a, swap_a), backend.compose(swap_b, swap_b))
        assert backend.same(backend.compose(both, both), squares)
