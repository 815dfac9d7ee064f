from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ildtt.core.core import Service
from ildtt.core.modules.checker.models import RULES, CheckedModule, DeclVerdict
from ildtt.core.modules.corpus.manifest import load_manifest
from ildtt.core.modules.corpus.models import CorpusReport, EntryResult, Expectation, ManifestEntry
from ildtt.core.modules.model.models import BackendName, OracleResult
from ildtt.core.modules.surface.models import DeclKind, EqDirective, IsoDirective, decl_kind
from ildtt.errors import IldttError

logger = logging.getLogger(__name__)

LISTED_KINDS = (DeclKind.DEF, DeclKind.CHECK, DeclKind.EQ, DeclKind.ISO)


@dataclass
class FileRun:
    entries: list[EntryResult] = field(default_factory=list)
    unlisted: list[str] = field(default_factory=list)
    rules: set[str] = field(default_factory=set)
    rejected: set[str] = field(default_factory=set)
    oracle: list[OracleResult] = field(default_factory=list)


class CorpusService(Service):
    """Runs the corpus manifest against the kernel."""

    def run(self, directory: Path | None = None, *, oracle: bool = False) -> CorpusReport:
        """Check every listed file; any disagreement with the manifest fails the run."""
        directory = directory or self.config.corpus_dir
        manifest = load_manifest(directory)
        files = manifest.files()
        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            runs = list(pool.map(lambda f: self._run_file(directory, f, manifest.for_file(f), oracle=oracle), files))

        report = CorpusReport()
        covered: set[str] = set()
        rejected: set[str] = set()
        for run in runs:
            report.entries.extend(run.entries)
            report.unlisted.extend(run.unlisted)
            report.oracle.extend(run.oracle)
            covered |= run.rules
            rejected |= run.rejected
        on_disk = sorted(p.relative_to(directory).as_posix() for p in directory.rglob("*.ildtt"))
        report.unlisted.extend(f for f in on_disk if f not in files)
        report.rules_covered = [rule for rule in RULES if rule in covered]
        report.rules_missing = [rule for rule in RULES if rule not in covered]
        report.rules_rejected = sorted(rejected)
        logger.info("corpus: %d entries, %d failed", len(report.entries), len(report.failures()))
        return report

    def _run_file(self, directory: Path, file: str, entries: list[ManifestEntry], *, oracle: bool) -> FileRun:
        run = FileRun()
        try:
            checked = self.core.services.checker.check_file(directory / file)
        except IldttError as e:
            for entry in entries:
                run.entries.append(self._result(entry, "unreadable", passed=False, note=str(e)))
            return run

        listed = {entry.name for entry in entries}
        run.unlisted = [
            f"{file}: {decl.name}" for decl in checked.module.decls if decl_kind(decl) in LISTED_KINDS and decl.name not in listed
        ]
        run.rules = checked.report.rules_used()
        for entry in entries:
            run.entries.append(self._entry(checked, entry, run))
        if oracle:
            wanted = {entry.name for entry in entries if entry.expected is Expectation.EQ_TRUE}
            for backend in BackendName:
                results = self.core.services.model.oracle(checked, backend)
                run.oracle.extend(r for r in results if r.name in wanted)
        return run

    def _entry(self, checked: CheckedModule, entry: ManifestEntry, run: FileRun) -> EntryResult:
        decl = checked.module.get(entry.name)
        result = checked.report.get(entry.name)
        if decl is None or result is None:
            return self._result(entry, "missing", passed=False, note="no such declaration")
        written = decl.mode if isinstance(decl, EqDirective | IsoDirective) else None
        if written is not None and written != entry.mode:
            return self._result(entry, str(result.verdict), passed=False, note="mode differs from the directive")
        passed = entry.expected.admits(result.verdict)
        actual = str(result.verdict)
        note = result.diagnostic.render() if result.diagnostic is not None and not passed else ""
        if result.verdict is DeclVerdict.ERROR and result.diagnostic is not None:
            rule = result.diagnostic.rule
            actual = f"{actual}:{rule}"
            if passed and rule is not None:
                run.rejected.add(rule)
            if passed and entry.rule is not None and rule != entry.rule:
                passed = False
                note = f"rejected by {rule}, expected {entry.rule}"
        logger.debug("%s %s: expected %s, got %s", entry.file, entry.name, entry.expected, actual)
        return self._result(entry, actual, passed=passed, note=note)

    def _result(self, entry: ManifestEntry, actual: str, *, passed: bool, note: str = "") -> EntryResult:
        expected = f"{entry.expected}:{entry.rule}" if entry.rule else str(entry.expected)
        return EntryResult(
            file=entry.file, name=entry.name, expected=expected, actual=actual, passed=passed, note=note, covers=entry.covers
        )
