from __future__ import annotations

import logging

from ildtt.core.core import Service
from ildtt.core.modules.checker.models import Derivation
from ildtt.core.modules.equality.engine import Engine
from ildtt.core.modules.equality.models import CanonForm, EqualityMode, Outcome, Verdict
from ildtt.core.modules.surface.models import ModeSpec
from ildtt.core.modules.syntax.context import DualContext, Signature
from ildtt.core.modules.syntax.models import Ty

logger = logging.getLogger(__name__)


class EqualityService(Service):
    """Judgemental equality at the configured mode."""

    def mode(self, spec: ModeSpec | None = None) -> EqualityMode:
        """Mode written on a directive, falling back to configuration for unset fields."""
        spec = spec or ModeSpec()
        return EqualityMode(
            eta_negative=self.config.eta if spec.eta is None else spec.eta,
            ext_positive=self.config.ext if spec.ext is None else spec.ext,
            fuel=self.config.fuel if spec.fuel is None else spec.fuel,
        )

    def engine(self, signature: Signature, mode: EqualityMode | None = None) -> Engine:
        return Engine(signature, mode or self.mode(), self.config.step_ceiling)

    def normalize(self, signature: Signature, derivation: Derivation, mode: EqualityMode | None = None) -> CanonForm:
        return self.engine(signature, mode).normalize(derivation.ctx.fresh(), derivation.term)

    def equal(
        self, signature: Signature, left: Derivation, right: Derivation, mode: EqualityMode | None = None
    ) -> Outcome:
        """Both derivations must conclude in the same context at the same type."""
        outcome = self.engine(signature, mode).equal(left.ctx.fresh(), left.term, right.term, left.ty)
        logger.debug("equal: %s after %d rewrites", outcome.verdict, len(outcome.trace))
        return outcome

    def type_equal(
        self, signature: Signature, ctx: DualContext, left: Ty, right: Ty, mode: EqualityMode | None = None
    ) -> Verdict:
        return self.engine(signature, mode).type_equal(ctx, left, right)
