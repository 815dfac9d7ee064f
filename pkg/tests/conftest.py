from collections.abc import Callable, Iterator
from pathlib import Path

import pytest

from ildtt.app import App
from ildtt.config import Config
from ildtt.core.core import Core
from ildtt.core.modules.checker.models import CheckedModule

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture
def config() -> Config:
    return Config(corpus_dir=CORPUS, workers=2)


@pytest.fixture
def core(config: Config) -> Iterator[Core]:
    core = Core(config)
    with core.lifespan():
        yield core


@pytest.fixture
def app(config: Config) -> Iterator[App]:
    app = App(config)
    with app.lifespan():
        yield app


@pytest.fixture
def check(core: Core) -> Callable[[str], CheckedModule]:
    """Parse and check module source text."""

    def run(text: str) -> CheckedModule:
        module = core.services.surface.parse_text(text)
        return core.services.checker.check_module(module)

    return run
