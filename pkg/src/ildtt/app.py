from collections.abc import Generator
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from ildtt.config import Config
from ildtt.core.core import Core
from ildtt.core.modules.checker.models import CheckedModule, DeclVerdict, Derivation, ModuleReport
from ildtt.core.modules.corpus.models import CorpusReport
from ildtt.core.modules.equality.models import CanonForm, Outcome, Verdict
from ildtt.core.modules.model.models import EvalReport
from ildtt.core.modules.syntax.models import Term, Ty
from ildtt.errors import CheckError, NotFoundError, ValidationError


class App:
    """Facade the command line talks to.

    Never exposes Core or Services directly.
    """

    def __init__(self, config: Config) -> None:
        self.config = config
        self._core = Core(config)

    @contextmanager
    def lifespan(self) -> Generator[None]:
        """Manage application lifecycle - startup and shutdown."""
        with self._core.lifespan():
            yield

    # Checking

    def check_file(self, path: Path) -> CheckedModule:
        return self._core.services.checker.check_file(path)

    def check_files(self, paths: list[Path]) -> list[ModuleReport]:
        """Check independent files concurrently; reports come back in argument order."""
        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            return list(pool.map(lambda p: self.check_file(p).report, paths))

    def _derivation(self, checked: CheckedModule, name: str) -> Derivation:
        result = checked.report.get(name)
        if result is None:
            raise NotFoundError(f"Definition '{name}' not found")
        if result.verdict is DeclVerdict.ERROR and result.diagnostic is not None:
            raise CheckError(result.diagnostic)
        if name not in checked.derivations:
            raise ValidationError(f"'{name}' is a {result.kind} declaration, not a definition")
        return checked.derivations[name]

    # Equality

    def normalize(self, path: Path, name: str) -> CanonForm:
        checked = self.check_file(path)
        derivation = self._derivation(checked, name)
        return self._core.services.equality.normalize(checked.signature, derivation)

    def equal(self, path: Path, left: str, right: str) -> Outcome:
        """Compare two definitions made in the same context at equal types."""
        checked = self.check_file(path)
        dl = self._derivation(checked, left)
        dr = self._derivation(checked, right)
        equality = self._core.services.equality
        if dl.ctx.fresh() != dr.ctx.fresh():
            raise ValidationError(f"'{left}' and '{right}' are defined in different contexts")
        if equality.type_equal(checked.signature, dl.ctx.fresh(), dl.ty, dr.ty) is not Verdict.TRUE:
            raise ValidationError(f"'{left}' and '{right}' have different types")
        return equality.equal(checked.signature, dl, dr)

    # Models and corpus

    def evaluate(self, path: Path, backend: str | None = None, model_path: Path | None = None) -> EvalReport:
        model_service = self._core.services.model
        model = model_service.load(model_path) if model_path is not None else None
        return model_service.evaluate(self.check_file(path), backend, model)

    def run_corpus(self, directory: Path | None = None, *, oracle: bool = False) -> CorpusReport:
        return self._core.services.corpus.run(directory, oracle=oracle)

    # Printing

    def print_term(self, term: Term, *, unicode: bool = False) -> str:
        return self._core.services.surface.print_term(term, unicode=unicode)

    def print_type(self, ty: Ty, *, unicode: bool = False) -> str:
        return self._core.services.surface.print_type(ty, unicode=unicode)
