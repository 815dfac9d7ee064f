"""Command line entry point."""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import pydantic

from ildtt.app import App
from ildtt.config import Config
from ildtt.core.modules.checker.models import ModuleReport
from ildtt.core.modules.corpus.models import CorpusReport
from ildtt.core.modules.equality.models import Verdict
from ildtt.core.modules.model.models import BackendName, EvalReport, OracleStatus
from ildtt.errors import IldttError
from ildtt.log import setup_logging


def _field(text: str) -> str:
    return " ".join(text.split()) or "-"


def _lines(*fields: str) -> str:
    return "\t".join(_field(f) for f in fields)


def _fuel(text: str) -> int:
    if not text.isdigit() or int(text) < 1:
        raise argparse.ArgumentTypeError("fuel must be a positive integer")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eta", action=argparse.BooleanOptionalAction, default=None, help="eta rules for negative types")
    common.add_argument(
        "--ext", nargs="?", type=_fuel, const=0, default=None, metavar="FUEL", help="positive extensionality, with optional fuel"
    )
    common.add_argument("--format", choices=["text", "lines"], default="text", help="output format")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--unicode", action="store_true", help="print connectives as unicode symbols")

    parser = argparse.ArgumentParser(prog="ildtt", description="Proof checker for intuitionistic linear dependent type theory")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", parents=[common], help="type-check modules")
    check.add_argument("files", nargs="+", type=Path)

    norm = commands.add_parser(
        "norm",
        parents=[common],
        help="print the canonical form of a definition",
        description=(
            "Print the canonical form of a definition. With eta on (the default) lambdas and pairs "
            "that only re-wrap a variable are eta-contracted, so the form may be shorter than any "
            "beta-normal form; pass --no-eta to see the beta-normal form alone."
        ),
    )
    norm.add_argument("file", type=Path)
    norm.add_argument("--def", dest="name", required=True)

    eq = commands.add_parser("eq", parents=[common], help="decide equality of two definitions")
    eq.add_argument("file", type=Path)
    eq.add_argument("--left", required=True)
    eq.add_argument("--right", required=True)

    evaluate = commands.add_parser("eval", parents=[common], help="interpret a module in a finite model")
    evaluate.add_argument("file", type=Path)
    evaluate.add_argument("--backend", choices=[b.value for b in BackendName], required=True)
    evaluate.add_argument("--model", type=Path, default=None)

    corpus = commands.add_parser("corpus", parents=[common], help="run the corpus manifest")
    corpus.add_argument("--dir", type=Path, default=None)
    corpus.add_argument("--oracle", action="store_true", help="also compare denotations of accepted equations")
    return parser


def _config(args: argparse.Namespace) -> Config:
    overrides: dict[str, Any] = {}
    if args.eta is not None:
        overrides["eta"] = args.eta
    if args.ext is not None:
        overrides["ext"] = True
        if args.ext > 0:
            overrides["fuel"] = args.ext
    if args.verbose:
        overrides["log_level"] = "DEBUG"
    return Config().model_copy(update=overrides)


def _print_check(reports: list[ModuleReport], fmt: str) -> None:
    for report in reports:
        path = report.path or "-"
        for result in report.results:
            rule = result.diagnostic.rule if result.diagnostic is not None else None
            message = result.diagnostic.message if result.diagnostic is not None else ""
            if fmt == "lines":
                print(_lines(path, result.name, result.kind, result.verdict, rule or "-", message))
                continue
            if result.diagnostic is not None:
                print(result.diagnostic.render(path), file=sys.stderr)
            elif result.kind in ("eq", "iso"):
                print(f"{path}: {result.kind} {result.name}: {result.verdict}")


def _print_eval(report: EvalReport) -> None:
    for m in report.morphisms:
        print(f"{m.name} at {m.point}: {m.dom} -> {m.cod}")
        for row in m.table:
            print(f"  {row}")
    for law in report.bang_laws:
        status = "ok" if law.holds else "VIOLATED"
        print(f"!{law.ty} at {law.point}: |A| = {law.size}, |!A| = {law.bang_size}, expected {law.expected} ({status})")
    for r in report.oracle:
        note = f" ({r.note})" if r.note else ""
        print(f"oracle {r.name} [{r.backend}]: {r.status}{note}")


def _print_corpus(report: CorpusReport, fmt: str) -> None:
    for entry in report.entries:
        if fmt == "lines":
            print(_lines(entry.file, entry.name, "corpus", "pass" if entry.passed else "fail", entry.expected, entry.note))
        elif not entry.passed:
            print(f"{entry.file}: {entry.name}: expected {entry.expected}, got {entry.actual}. {entry.note}", file=sys.stderr)
    for item in report.unlisted:
        print(f"not in manifest: {item}", file=sys.stderr)
    for r in report.oracle_failures():
        print(f"oracle: {r.name} [{r.backend}]: {r.status}: {r.note}", file=sys.stderr)
    if fmt == "text":
        failed = len(report.failures())
        print(f"{len(report.entries)} entries, {failed} failed")
        print(f"rules covered: {len(report.rules_covered)}/{len(report.rules_covered) + len(report.rules_missing)}")
        if report.rules_missing:
            print(f"rules not covered: {', '.join(report.rules_missing)}")
        if report.oracle:
            agreed = sum(1 for r in report.oracle if r.status is OracleStatus.AGREES)
            outside = len(report.oracle_outside())
            print(f"oracle: {agreed}/{len(report.oracle)} denotations agree, {outside} outside the model")


def run(args: argparse.Namespace, app: App) -> int:
    match args.command:
        case "check":
            reports = app.check_files(args.files)
            _print_check(reports, args.format)
            return 0 if all(r.ok for r in reports) else 1
        case "norm":
            form = app.normalize(args.file, args.name)
            print(app.print_term(form.term, unicode=args.unicode))
            return 0
        case "eq":
            outcome = app.equal(args.file, args.left, args.right)
            print(outcome.verdict)
            return 0 if outcome.verdict is Verdict.TRUE else 1
        case "eval":
            report = app.evaluate(args.file, args.backend, args.model)
            _print_eval(report)
            return 0 if report.ok else 1
        case "corpus":
            corpus = app.run_corpus(args.dir, oracle=args.oracle)
            _print_corpus(corpus, args.format)
            return 0 if corpus.ok else 1
    return 2


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line; 0 on success, 1 on any failure, 2 on usage errors."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
    except pydantic.ValidationError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return 1
    setup_logging(config)
    app = App(config)
    try:
        with app.lifespan():
            return run(args, app)
    except IldttError as e:
        print(str(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
