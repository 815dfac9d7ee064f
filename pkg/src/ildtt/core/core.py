from __future__ import annotations

import logging
from collections.abc import Generator
from contextlib import contextmanager

from ildtt.config import Config

logger = logging.getLogger(__name__)


class Service:
    """Base class for kernel services."""

    def __init__(self, config: Config) -> None:
        self.config = config
        self._core: Core | None = None

    def on_start(self) -> None:
        """Initialize service on kernel startup."""

    def on_stop(self) -> None:
        """Cleanup service on kernel shutdown."""

    @property
    def core(self) -> Core:
        """Get the core kernel context."""
        if self._core is None:
            raise RuntimeError("Core not set for service")
        return self._core

    def set_core(self, core: Core) -> None:
        """Set the core kernel context."""
        self._core = core


class Services:
    """Service registry for all kernel services."""

    def __init__(self, config: Config) -> None:
        from ildtt.core.modules.checker.service import CheckerService  # noqa: PLC0415
        from ildtt.core.modules.corpus.service import CorpusService  # noqa: PLC0415
        from ildtt.core.modules.equality.service import EqualityService  # noqa: PLC0415
        from ildtt.core.modules.model.service import ModelService  # noqa: PLC0415
        from ildtt.core.modules.surface.service import SurfaceService  # noqa: PLC0415

        self.surface = SurfaceService(config)
        self.equality = EqualityService(config)
        self.checker = CheckerService(config)
        self.model = ModelService(config)
        self.corpus = CorpusService(config)

    def set_core(self, core: Core) -> None:
        """Set core reference for all services."""
        self.surface.set_core(core)
        self.equality.set_core(core)
        self.checker.set_core(core)
        self.model.set_core(core)
        self.corpus.set_core(core)

    def start_all(self) -> None:
        """Initialize all services."""
        self.surface.on_start()
        self.equality.on_start()
        self.checker.on_start()
        self.model.on_start()
        self.corpus.on_start()

    def stop_all(self) -> None:
        """Cleanup all services."""
        self.surface.on_stop()
        self.equality.on_stop()
        self.checker.on_stop()
        self.model.on_stop()
        self.corpus.on_stop()


class Core:
    """Core kernel context with services."""

    def __init__(self, config: Config) -> None:
        self.config = config
        self.services = Services(config)
        self.services.set_core(self)

    @contextmanager
    def lifespan(self) -> Generator[None]:
        """Manage kernel lifecycle - startup and shutdown."""
        self.on_start()
        try:
            yield
        finally:
            self.on_stop()

    def on_start(self) -> None:
        """Start all services."""
        logger.debug("starting services")
        self.services.start_all()

    def on_stop(self) -> None:
        """Stop all services."""
        self.services.stop_all()
