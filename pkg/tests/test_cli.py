import pytest

from conftest import CORPUS
from ildtt.__main__ import main

SOURCE = """type D
type E
def beta {; w : D} : D := (\\v:D. v) w
def plain {; w : D} : D := w
def eta {; f : D -o E} : D -o E := \\v:D. f v
def fn {; f : D -o E} : D -o E := f
eq same {; w : D} : D := beta == plain
"""


@pytest.fixture
def module(tmp_path):
    path = tmp_path / "m.ildtt"
    path.write_text(SOURCE, encoding="utf-8")
    return path


def test_check(module, capsys):
    assert main(["check", str(module)]) == 0
    assert f"{module}: eq same: true" in capsys.readouterr().out


def test_check_lines(module, capsys):
    assert main(["check", "--format", "lines", str(module)]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert [row[1] for row in rows] == ["D", "E", "beta", "plain", "eta", "fn", "same"]
    assert rows[2][2:5] == ["def", "ok", "-"]


def test_check_rejections(capsys):
    assert main(["check", str(CORPUS / "negative" / "rules.ildtt")]) == 1
    assert "Ctx" in capsys.readouterr().err


def test_norm(capsys):
    assert main(["norm", str(CORPUS / "pi_lolli.ildtt"), "--def", "roundtrip_g_f"]) == 0
    assert capsys.readouterr().out.strip() == "y"


def test_norm_unknown_definition(module, capsys):
    assert main(["norm", str(module), "--def", "nope"]) == 1
    assert "Definition 'nope' not found" in capsys.readouterr().err


def test_eq(module, capsys):
    assert main(["eq", str(module), "--left", "beta", "--right", "plain"]) == 0
    assert capsys.readouterr().out.strip() == "true"


def test_eq_without_eta(module, capsys):
    assert main(["eq", str(module), "--left", "eta", "--right", "fn"]) == 0
    assert main(["eq", "--no-eta", str(module), "--left", "eta", "--right", "fn"]) == 1
    assert capsys.readouterr().out.split() == ["true", "false"]


def test_eq_different_contexts(module, capsys):
    assert main(["eq", str(module), "--left", "beta", "--right", "fn"]) == 1
    assert "different contexts" in capsys.readouterr().err


def test_eval(capsys):
    args = ["eval", str(CORPUS / "bang.ildtt"), "--backend", "pset", "--model", str(CORPUS / "models" / "bang.cfg")]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert "derelict at d=0" in out
    assert "VIOLATED" not in out


def test_corpus(capsys):
    assert main(["corpus", "--dir", str(CORPUS)]) == 0
    out = capsys.readouterr().out
    assert "0 failed" in out
    assert "rules not covered" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "x.ildtt", "--backend", "vect"],
        ["check", "--ext=0", "x.ildtt"],
        ["norm", "x.ildtt"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_norm_help_mentions_eta_contraction(capsys):
    with pytest.raises(SystemExit):
        main(["norm", "--help"])
    assert "contracted" in capsys.readouterr().out


def test_norm_without_eta(module, capsys):
    assert main(["norm", str(module), "--def", "eta"]) == 0
    assert main(["norm", "--no-eta", str(module), "--def", "eta"]) == 0
    first, second = capsys.readouterr().out.splitlines()
    assert first == "f"
    assert second != "f"
