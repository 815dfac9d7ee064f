import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CORPUS
from ildtt.core.modules.model.gf2 import Gf2VectBackend
from ildtt.core.modules.model.interp import (
    Env,
    Interpreter,
    count_sections,
    frobenius_map,
    seely_top,
    seely_witnesses,
)
from ildtt.core.modules.model.loader import load_model, parse_model
from ildtt.core.modules.model.models import BackendName, ModelConfig, OracleStatus
from ildtt.core.modules.model.pointed import PointedSetBackend
from ildtt.core.modules.syntax.context import Signature
from ildtt.core.modules.syntax.models import Bang, Ff, Pi, Tt, Two, Unit
from ildtt.errors import ModelError, NotFoundError, ValidationError

BACKENDS = [PointedSetBackend(), Gf2VectBackend()]
IDS = ["pset", "gf2"]
BANG = CORPUS / "bang.ildtt"


@pytest.mark.parametrize(("model", "backend"), [("bang.cfg", BackendName.PSET), ("bang_gf2.cfg", BackendName.GF2)])
def test_evaluate_with_model(app, model, backend):
    report = app.evaluate(BANG, model_path=CORPUS / "models" / model)
    assert report.backend is backend
    assert {m.name for m in report.morphisms} == {"derelict", "duplicate", "discard", "promote"}
    assert report.bang_laws
    assert all(law.holds for law in report.bang_laws)
    assert report.ok


def test_evaluate_points(app):
    report = app.evaluate(BANG, model_path=CORPUS / "models" / "bang.cfg")
    derelict = [m for m in report.morphisms if m.name == "derelict"]
    assert [m.point for m in derelict] == ["d=0", "d=1", "d=2"]
    # !B(d) -o B(d) at d=2: B has size 3, so !B has 4 and the hom has 3^3
    assert derelict[2].cod == 27


def test_model_must_cover_the_signature(core):
    checked = core.services.checker.check_file(BANG)
    model = parse_model("backend pset\ntype A 3\n")
    with pytest.raises(ModelError, match="does not interpret base type 'B'"):
        core.services.model.evaluate(checked, None, model)


def test_backend_mismatch(core):
    checked = core.services.checker.check_file(BANG)
    model = core.services.model
    with pytest.raises(ValidationError, match="written for backend 'gf2'"):
        model.interpreter(checked, model.backend("pset"), ModelConfig(backend=BackendName.GF2))


def test_unknown_backend(core):
    with pytest.raises(ValidationError, match="Unknown backend 'vect'"):
        core.services.model.backend("vect")


@pytest.mark.parametrize("backend", ["pset", "gf2"])
def test_oracle(core, backend):
    checked = core.services.checker.check_file(CORPUS / "two.ildtt")
    results = {r.name: r for r in core.services.model.oracle(checked, backend)}
    # two_u is decided with Two-U, and still holds at the extra points of 2
    assert {name: r.status for name, r in results.items()} == {
        "two_c1": OracleStatus.AGREES,
        "two_c2": OracleStatus.AGREES,
        "pick_tt": OracleStatus.AGREES,
        "two_u": OracleStatus.AGREES,
        "negate_twice": OracleStatus.AGREES,
    }


def test_oracle_reports_model_errors_as_failures(check, core):
    checked = check("type D\nconst c : D\neq n : D := c == c\n")
    report = core.services.model.evaluate(checked, "pset", ModelConfig())
    [result] = report.oracle
    assert result.status is OracleStatus.FAILED
    assert "does not interpret base type" in result.note
    assert not report.ok


def test_oracle_explains_two_u_disagreements(check, core):
    source = "type D\nconst c : D\neq [ext] n {b : 2} : D := if[s. D] b then c else c == c\n"
    checked = check(source)
    assert "Two-U" in checked.report.get("n").trace
    for backend in ("pset", "gf2"):
        [result] = core.services.model.oracle(checked, backend)
        assert result.status is OracleStatus.OUTSIDE
        assert "Two-U" in result.note
        assert result.status.passed


def test_oracle_counts_limits_as_outside(check, core):
    checked = check("type D\neq n {; u : !!!D} : !!!D := u == u\n")
    [result] = core.services.model.oracle(checked, "pset")
    assert result.status is OracleStatus.OUTSIDE
    assert result.note == "beyond the configured caps: bang nested deeper than 2"


@pytest.mark.parametrize(("backend", "points"), [(BACKENDS[0], 3), (BACKENDS[1], 4)], ids=IDS)
def test_two_has_more_points_than_tt_and_ff(backend, points):
    interp = Interpreter(Signature(), backend)
    two = interp.obj(Env(), Two())
    assert backend.count_points(two) == points
    assert not backend.equal(interp.eval(Env(), Tt()), interp.eval(Env(), Ff()))
    assert backend.count_points(interp.obj(Env(), Pi("x", Two(), Unit()))) == 2**points


def test_bang_depth_is_capped():
    interp = Interpreter(Signature(), PointedSetBackend(), max_bang_depth=1)
    assert interp.obj(Env(), Bang(Unit())) == 2
    with pytest.raises(ModelError, match="nested deeper"):
        interp.obj(Env(), Bang(Bang(Unit())))


def test_dimension_is_capped(check):
    checked = check("type A\nconst a : A\ndef k : A := a\n")
    interp = Interpreter(checked.signature, Gf2VectBackend(), parse_model("type A 5\nconst a * 00000\n"), max_dim=3)
    with pytest.raises(ModelError, match="exceeds the cap"):
        interp.interp_term(checked.derivations["k"])


# Every pair of components with at most 4 points: 0..3 in pointed sets, dimension 0..2 over GF(2).
SMALL = [(BACKENDS[0], a, c) for a in range(4) for c in range(4)] + [(BACKENDS[1], a, c) for a in range(3) for c in range(3)]


@pytest.mark.parametrize(("backend", "a", "c"), SMALL)
def test_seely_witnesses_are_inverse(backend, a, c):
    fwd, bwd = seely_witnesses(backend, a, c)
    assert backend.same(backend.compose(bwd, fwd), backend.identity(fwd.dom))
    assert backend.same(backend.compose(fwd, bwd), backend.identity(bwd.dom))


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_bang_top_is_unit(backend):
    fwd, bwd = seely_top(backend)
    assert backend.same(backend.compose(bwd, fwd), backend.identity(fwd.dom))
    assert backend.same(backend.compose(fwd, bwd), backend.identity(bwd.dom))


# Largest object with at most 3 points in each backend.
SIZES = {"pset": 2, "gf2": 1}


@st.composite
def reindexings(draw, largest):
    """A map f from S to S', a family xi over S' and a family over S."""
    xi = draw(st.lists(st.integers(0, largest), min_size=1, max_size=3))
    f = draw(st.lists(st.integers(0, len(xi) - 1), max_size=3))
    fam = draw(st.lists(st.integers(0, largest), min_size=len(f), max_size=len(f)))
    return f, xi, fam


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
@given(data=st.data())
def test_frobenius_maps_are_isomorphisms(backend, data):
    f, xi, fam = data.draw(reindexings(SIZES[backend.name]))
    maps = frobenius_map(backend, f, xi, fam)
    assert len(maps) == len(xi)
    assert all(backend.is_iso(m) for m in maps)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
@given(data=st.data())
def test_sections_match_the_product_formula(backend, data):
    fam = data.draw(st.lists(st.integers(0, SIZES[backend.name]), min_size=1, max_size=3))
    f = data.draw(st.lists(st.integers(0, len(fam) - 1), max_size=3))
    brute, formula = count_sections(backend, f, fam)
    assert brute == formula


DISCRETE = """type F (z : 2)
def to_pi {; p : F(tt) & F(ff)} : Pi !z:2. F(z) := \\!z:2. if[s. F(s)] z then fst p else snd p
def to_with {; t : Pi !z:2. F(z)} : F(tt) & F(ff) := <t !tt, t !ff>
"""


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_pi_over_two_is_larger_than_with(check, backend):
    checked = check(DISCRETE)
    interp = Interpreter(checked.signature, backend, defaults=True)
    [(_, to_pi)] = interp.interp_term(checked.derivations["to_pi"])
    [(_, to_with)] = interp.interp_term(checked.derivations["to_with"])
    # F(tt) & F(ff) comes back unchanged; the fibres of Pi over the extra points of 2 do not.
    assert backend.same(backend.compose(to_with, to_pi), backend.identity(to_pi.dom))
    assert not backend.same(backend.compose(to_pi, to_with), backend.identity(to_with.dom))
    assert not interp.check_iso_denot(checked.derivations["to_with"], checked.derivations["to_pi"])


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
@pytest.mark.parametrize(
    ("file", "name"), [("seely.ildtt", "seely_with"), ("seely.ildtt", "seely_top"), ("sigma_tensor.ildtt", "sigma_as_tensor")]
)
def test_corpus_isos_denote_isomorphisms(core, backend, file, name):
    checked = core.services.checker.check_file(CORPUS / file)
    interp = core.services.model.interpreter(checked, backend)
    assert interp.check_iso_denot(*checked.isos[name])


def test_iso_witnesses_take_one_argument(check):
    checked = check("type D\ndef two {; u : D, v : D} : D (x) D := u (x) v\n")
    d = checked.derivations["two"]
    with pytest.raises(ModelError, match="exactly one linear argument"):
        Interpreter(checked.signature, PointedSetBackend(), defaults=True).check_iso_denot(d, d)


def test_parse_model():
    model = parse_model("# plane\nbackend gf2\ntype A 2\ntype B [00] 0   # empty fibre\ntype B * 1\nconst c [01] 1\n")
    assert model.backend is BackendName.GF2
    assert model.type_size("A", ()) == "2"
    assert model.type_size("B", ("00",)) == "0"
    assert model.type_size("B", ("11",)) == "1"
    assert model.const_value("c", ("01",)) == "1"
    assert model.const_value("c", ("10",)) is None


@pytest.mark.parametrize(
    ("text", "message"),
    [("backend vect\n", "unknown backend 'vect'"), ("type A\n", "cannot read"), ("sort A 2\n", "cannot read")],
)
def test_unreadable_models(text, message):
    with pytest.raises(ModelError, match=message):
        parse_model(text, "m.cfg")


def test_missing_model_file(tmp_path):
    with pytest.raises(NotFoundError):
        load_model(tmp_path / "absent.cfg")
