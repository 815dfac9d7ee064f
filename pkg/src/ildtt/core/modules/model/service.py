from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from ildtt.core.core import Service
from ildtt.core.modules.checker.models import CheckedModule, DeclVerdict
from ildtt.core.modules.equality.models import Rewrite
from ildtt.core.modules.model.backends import SmcBackend
from ildtt.core.modules.model.gf2 import Gf2VectBackend
from ildtt.core.modules.model.interp import Interpreter, bang_size_law
from ildtt.core.modules.model.loader import load_model
from ildtt.core.modules.model.models import (
    BackendName,
    BangLaw,
    EvalReport,
    ModelConfig,
    MorphismSummary,
    OracleResult,
    OracleStatus,
)
from ildtt.core.modules.model.pointed import PointedSetBackend
from ildtt.core.modules.syntax.models import Bang, Node
from ildtt.core.modules.syntax.ops import children, is_locally_closed
from ildtt.errors import ModelError, ModelLimitError, ValidationError

logger = logging.getLogger(__name__)

BACKENDS: dict[BackendName, type[SmcBackend[Any]]] = {
    BackendName.PSET: PointedSetBackend,
    BackendName.GF2: Gf2VectBackend,
}

# Two-U case-splits a variable of 2 into tt and ff, but 2 has more global points in both backends.
UNVALIDATED_RULES = frozenset({Rewrite.TWO_U.value})


def _bangs(node: Node) -> list[Bang]:
    found = [node] if isinstance(node, Bang) and is_locally_closed(node) else []
    for _, child in children(node):
        found.extend(_bangs(child))
    return found


class ModelService(Service):
    """Denotational semantics in finite families, and the soundness oracle built on it."""

    def backend(self, name: str | None = None) -> SmcBackend[Any]:
        try:
            key = BackendName(name or self.config.backend)
        except ValueError:
            raise ValidationError(f"Unknown backend '{name}', expected one of: {', '.join(BackendName)}") from None
        return BACKENDS[key]()

    def load(self, path: Path) -> ModelConfig:
        return load_model(path)

    def interpreter(
        self, checked: CheckedModule, backend: SmcBackend[Any], model: ModelConfig | None = None
    ) -> Interpreter[Any]:
        """Without a model every base type and constant gets the backend's default."""
        if model is not None and model.backend is not None and model.backend != backend.name:
            raise ValidationError(f"Model is written for backend '{model.backend}', not '{backend.name}'")
        return Interpreter(
            checked.signature,
            backend,
            model,
            defaults=model is None,
            max_dim=self.config.max_dim,
            max_bang_depth=self.config.max_bang_depth,
        )

    def evaluate(self, checked: CheckedModule, backend_name: str | None = None, model: ModelConfig | None = None) -> EvalReport:
        backend = self.backend(backend_name or (model.backend if model is not None else None))
        interp = self.interpreter(checked, backend, model)
        report = EvalReport(path=checked.module.path, backend=BackendName(backend.name))
        surface = self.core.services.surface
        for name, derivation in checked.derivations.items():
            for env, morphism in interp.interp_term(derivation):
                report.morphisms.append(
                    MorphismSummary(
                        name=name,
                        point=env.point(),
                        dom=backend.size(morphism.dom),
                        cod=backend.size(morphism.cod),
                        table=[f"{i} -> {backend.show(morphism.cod, v)}" for i, v in enumerate(morphism.images)],
                    )
                )
            for bang in _bangs(derivation.ty):
                for env, g in interp.interp_type(derivation.ctx, bang.ty):
                    observed, expected = bang_size_law(backend, g)
                    report.bang_laws.append(
                        BangLaw(
                            ty=surface.print_type(bang.ty),
                            point=env.point(),
                            size=backend.size(g),
                            bang_size=observed,
                            expected=expected,
                        )
                    )
        report.oracle = self._oracle(checked, interp)
        logger.debug("evaluated %d morphisms in %s", len(report.morphisms), backend.name)
        return report

    def oracle(self, checked: CheckedModule, backend_name: str) -> list[OracleResult]:
        """Denotational check of every equation and isomorphism the engine accepted, under default models."""
        backend = self.backend(backend_name)
        return self._oracle(checked, self.interpreter(checked, backend))

    def _oracle(self, checked: CheckedModule, interp: Interpreter[Any]) -> list[OracleResult]:
        backend = BackendName(interp.backend.name)
        results: list[OracleResult] = []
        accepted = [r for r in checked.report.results if r.verdict is DeclVerdict.TRUE]
        for result in accepted:
            name = result.name
            if name not in checked.equations and name not in checked.isos:
                continue
            try:
                if name in checked.equations:
                    agrees = interp.denot_equal(*checked.equations[name])
                else:
                    agrees = interp.check_iso_denot(*checked.isos[name])
            except ModelLimitError as e:
                status, note = OracleStatus.OUTSIDE, f"beyond the configured caps: {e}"
            except ModelError as e:
                status, note = OracleStatus.FAILED, str(e)
            else:
                status, note = self._judge(agrees, result.trace)
            logger.debug("oracle %s in %s: %s", name, backend, status)
            results.append(OracleResult(name=name, backend=backend, status=status, note=note))
        return results

    def _judge(self, agrees: bool, trace: list[str]) -> tuple[OracleStatus, str]:
        if agrees:
            return OracleStatus.AGREES, ""
        if unvalidated := UNVALIDATED_RULES.intersection(trace):
            return OracleStatus.OUTSIDE, f"denotations differ, decided using {', '.join(sorted(unvalidated))}"
        return OracleStatus.DIFFERS, "denotations differ"
