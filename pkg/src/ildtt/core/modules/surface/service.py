from __future__ import annotations

import logging
from pathlib import Path

from ildtt.core.core import Service
from ildtt.core.modules.surface.models import SourceModule
from ildtt.core.modules.surface.parser import ParseResult, parse_module
from ildtt.core.modules.surface.printer import print_module, print_term, print_type
from ildtt.core.modules.syntax.models import Term, Ty
from ildtt.errors import NotFoundError, ParseError

logger = logging.getLogger(__name__)


class SurfaceService(Service):
    """Reads and writes the surface language."""

    def parse(self, text: str, path: str | None = None) -> ParseResult:
        return parse_module(text, path)

    def parse_text(self, text: str, path: str | None = None) -> SourceModule:
        """Parse a whole module; any diagnostic makes this fail."""
        result = self.parse(text, path)
        if not result.ok:
            raise ParseError(result.diagnostics)
        return result.module

    def load(self, path: Path) -> SourceModule:
        if not path.is_file():
            raise NotFoundError(f"File '{path}' not found")
        logger.debug("loading %s", path)
        return self.parse_text(path.read_text(encoding="utf-8"), str(path))

    def print_module(self, module: SourceModule, *, unicode: bool = False) -> str:
        return print_module(module, unicode=unicode)

    def print_term(self, term: Term, *, unicode: bool = False) -> str:
        return print_term(term, unicode=unicode)

    def print_type(self, ty: Ty, *, unicode: bool = False) -> str:
        return print_type(ty, unicode=unicode)
