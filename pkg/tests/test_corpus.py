import shutil
from collections import Counter

import pytest

from conftest import CORPUS
from ildtt.core.modules.checker.models import DeclVerdict
from ildtt.core.modules.corpus.manifest import load_manifest, parse_manifest, parse_mode
from ildtt.core.modules.corpus.models import Expectation
from ildtt.core.modules.model.models import OracleStatus
from ildtt.core.modules.surface.models import ModeSpec
from ildtt.errors import CorpusError

SOURCE = """type D
type E
def ident {; w : D} : D := w
def bad {; w : D, e : E} : D := w
eq [ext] beta {; w : D} : D := (\\v:D. v) w == w
"""

MANIFEST = """# covers: identity
a.ildtt ▸ ident ▸ ok ▸ -
a.ildtt ▸ bad ▸ type-error:Lin-Var ▸ -
a.ildtt ▸ beta ▸ eq-true ▸ ext
"""


@pytest.fixture
def corpus_dir(tmp_path):
    (tmp_path / "a.ildtt").write_text(SOURCE, encoding="utf-8")
    (tmp_path / "manifest.txt").write_text(MANIFEST, encoding="utf-8")
    return tmp_path


def test_full_corpus(app):
    report = app.run_corpus()
    assert report.failures() == []
    assert report.unlisted == []
    assert report.rules_missing == []
    assert {"Int-Weak", "Int-Exch", "Lin-Subst", "Tm-Eq-R", "Tm-Eq-T", "Pi-C", "Commute", "Two-U"} <= set(report.rules_covered)
    assert report.ok
    assert {"Ctx", "Lin-Var", "Lolli-I", "With-I", "Plus-E", "Sigma-I"} <= set(report.rules_rejected)


def test_small_corpus(app, corpus_dir):
    report = app.run_corpus(corpus_dir)
    assert report.ok
    assert [e.actual for e in report.entries] == ["ok", "error:Lin-Var", "true"]
    assert report.entries[0].covers == "identity"
    assert report.rules_rejected == ["Lin-Var"]
    assert "With-I" in report.rules_missing


@pytest.mark.parametrize(
    ("manifest", "name", "note"),
    [
        (MANIFEST.replace("type-error:Lin-Var", "type-error:Ann"), "bad", "rejected by Lin-Var, expected Ann"),
        (MANIFEST.replace("eq-true ▸ ext", "eq-true ▸ -"), "beta", "mode differs from the directive"),
        (MANIFEST + "a.ildtt ▸ ghost ▸ ok ▸ -\n", "ghost", "no such declaration"),
    ],
)
def test_disagreements(app, corpus_dir, manifest, name, note):
    (corpus_dir / "manifest.txt").write_text(manifest, encoding="utf-8")
    report = app.run_corpus(corpus_dir)
    assert not report.ok
    [failure] = report.failures()
    assert failure.name == name
    assert failure.note == note


def test_wrong_verdict(app, corpus_dir):
    (corpus_dir / "manifest.txt").write_text(MANIFEST.replace("▸ ident ▸ ok", "▸ ident ▸ type-error"), encoding="utf-8")
    [failure] = app.run_corpus(corpus_dir).failures()
    assert failure.expected == "type-error"
    assert failure.actual == "ok"


def test_unlisted_files_and_declarations(app, corpus_dir):
    (corpus_dir / "b.ildtt").write_text("type D\n", encoding="utf-8")
    (corpus_dir / "manifest.txt").write_text(MANIFEST.replace("a.ildtt ▸ ident ▸ ok ▸ -\n", ""), encoding="utf-8")
    report = app.run_corpus(corpus_dir)
    assert report.unlisted == ["a.ildtt: ident", "b.ildtt"]
    assert not report.ok


def test_oracle_run(app, tmp_path):
    shutil.copy(CORPUS / "two.ildtt", tmp_path / "two.ildtt")
    lines = (CORPUS / "manifest.txt").read_text(encoding="utf-8").splitlines()
    rows = [row for row in lines if row.startswith("two.ildtt")]
    (tmp_path / "manifest.txt").write_text("\n".join(rows) + "\n", encoding="utf-8")
    report = app.run_corpus(tmp_path, oracle=True)
    assert report.ok
    assert {r.backend for r in report.oracle} == {"pset", "gf2"}
    assert all(r.status is OracleStatus.AGREES for r in report.oracle)


def test_full_corpus_oracle(app):
    report = app.run_corpus(oracle=True)
    assert report.oracle_failures() == []
    assert report.ok
    expected = [entry for entry in load_manifest(CORPUS).entries if entry.expected is Expectation.EQ_TRUE]
    assert Counter(r.backend for r in report.oracle) == {"pset": len(expected), "gf2": len(expected)}
    # Only the Two-U derivations of with and plus over 2 fall outside: both see the basepoint of 2.
    outside = report.oracle_outside()
    assert {r.name for r in outside} <= {"amp_u", "sum_u"}
    assert all("Two-U" in r.note for r in outside)


def test_parse_manifest():
    manifest = parse_manifest(MANIFEST)
    assert manifest.files() == ["a.ildtt"]
    bad = manifest.entries[1]
    assert bad.expected is Expectation.TYPE_ERROR
    assert bad.rule == "Lin-Var"
    assert bad.line == 3
    assert manifest.entries[2].mode == ModeSpec(ext=True)


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("a.ildtt ▸ f ▸ ok\n", "expected four fields"),
        ("a.ildtt ▸ f ▸ maybe ▸ -\n", "unknown verdict 'maybe'"),
        ("a.ildtt ▸ f ▸ ok ▸ -\na.ildtt ▸ f ▸ ok ▸ -\n", "listed twice"),
        ("a.ildtt ▸ f ▸ ok ▸ fast\n", "unknown mode flag 'fast'"),
        ("a.ildtt ▸ f ▸ ok ▸ ext=0\n", "bad fuel"),
    ],
)
def test_unreadable_manifest(text, message):
    with pytest.raises(CorpusError, match=message):
        parse_manifest(text)


def test_parse_mode():
    assert parse_mode("-") == ModeSpec()
    assert parse_mode("ext=3, noeta") == ModeSpec(eta=False, ext=True, fuel=3)
    assert parse_mode("eta") == ModeSpec(eta=True)


def test_manifest_must_name_existing_files(tmp_path):
    with pytest.raises(CorpusError, match="No manifest"):
        load_manifest(tmp_path)
    (tmp_path / "manifest.txt").write_text("gone.ildtt ▸ f ▸ ok ▸ -\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="missing file 'gone.ildtt'"):
        load_manifest(tmp_path)


def test_expectations():
    assert Expectation.UNDECIDED_FORBIDDEN.admits(DeclVerdict.FALSE)
    assert not Expectation.UNDECIDED_FORBIDDEN.admits(DeclVerdict.UNDECIDED)
    assert not Expectation.EQ_TRUE.admits(DeclVerdict.OK)
    assert Expectation.TYPE_ERROR.admits(DeclVerdict.ERROR)
