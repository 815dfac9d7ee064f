"""Reader for `manifest.txt`.

    # covers: the lolli/pi theorem, construction of f
    pi_lolli.ildtt ▸ f ▸ ok ▸ -
    negative/contraction.ildtt ▸ dup ▸ type-error:Lin-Var ▸ -
    two.ildtt ▸ pi_two_round ▸ eq-true ▸ ext=12

A `# covers:` line annotates the entry after it. The mode column is `-` or the flags of
an equality directive (`ext`, `ext=N`, `eta`, `noeta`) separated by commas.
"""

from __future__ import annotations

from pathlib import Path

from ildtt.core.modules.corpus.models import CorpusManifest, Expectation, ManifestEntry
from ildtt.core.modules.surface.models import ModeSpec
from ildtt.errors import CorpusError

SEPARATOR = "▸"
COVERS = "# covers:"


def parse_mode(text: str) -> ModeSpec:
    if text == "-":
        return ModeSpec()
    eta: bool | None = None
    ext: bool | None = None
    fuel: int | None = None
    for flag in (f.strip() for f in text.split(",")):
        name, _, amount = flag.partition("=")
        match name:
            case "ext":
                ext = True
                if amount:
                    if not amount.isdigit() or int(amount) < 1:
                        raise CorpusError(f"bad fuel '{amount}'")
                    fuel = int(amount)
            case "eta":
                eta = True
            case "noeta":
                eta = False
            case _:
                raise CorpusError(f"unknown mode flag '{flag}'")
    return ModeSpec(eta, ext, fuel)


def parse_manifest(text: str) -> CorpusManifest:
    entries: list[ManifestEntry] = []
    covers = ""
    seen: set[tuple[str, str]] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith(COVERS):
            covers = line.removeprefix(COVERS).strip()
            continue
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(SEPARATOR)]
        if len(fields) != 4:
            raise CorpusError(f"manifest line {number}: expected four fields separated by '{SEPARATOR}'")
        file, name, verdict, mode = fields
        expected, _, rule = verdict.partition(":")
        try:
            expectation = Expectation(expected)
        except ValueError:
            raise CorpusError(f"manifest line {number}: unknown verdict '{expected}'") from None
        if (file, name) in seen:
            raise CorpusError(f"manifest line {number}: '{name}' in {file} is listed twice")
        seen.add((file, name))
        try:
            spec = parse_mode(mode)
        except CorpusError as e:
            raise CorpusError(f"manifest line {number}: {e}") from None
        entries.append(ManifestEntry(file, name, expectation, rule or None, spec, number, covers))
        covers = ""
    return CorpusManifest(tuple(entries))


def load_manifest(directory: Path) -> CorpusManifest:
    path = directory / "manifest.txt"
    if not path.is_file():
        raise CorpusError(f"No manifest at '{path}'")
    manifest = parse_manifest(path.read_text(encoding="utf-8"))
    for file in manifest.files():
        if not (directory / file).is_file():
            raise CorpusError(f"Manifest lists missing file '{file}'")
    return manifest
