"""Reader for the line-oriented model configuration format.

    # comment
    backend pset
    type B 3              # no codes: the same size at every parameter
    type P [1] 2          # P at the first non-base point of its parameter
    type P * 4            # and four points elsewhere
    const c [1] 2         # c at that parameter denotes point 2
    const d * 1

Codes and elements are written as the backend shows points: indices for pointed sets,
bit strings (`-` for the zero-dimensional space) for GF(2).
"""

from __future__ import annotations

import logging
import re
from pathlib import Path

from ildtt.core.modules.model.models import BackendName, FamilyEntry, ModelConfig
from ildtt.errors import ModelError, NotFoundError

logger = logging.getLogger(__name__)

ENTRY = re.compile(r"^(type|const)\s+([A-Za-z_][\w']*)\s+(?:(\*)|\[([^\]]*)\]\s*)?\s*(\S+)$")


def parse_model(text: str, source: str = "<model>") -> ModelConfig:
    config = ModelConfig()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("backend"):
            _, _, name = line.partition(" ")
            try:
                config.backend = BackendName(name.strip())
            except ValueError:
                raise ModelError(f"{source}:{number}: unknown backend '{name.strip()}'") from None
            continue
        match = ENTRY.match(line)
        if match is None:
            raise ModelError(f"{source}:{number}: cannot read '{line}'")
        kind, name, star, codes, value = match.groups()
        key = None if star or codes is None else tuple(c.strip() for c in codes.split(",") if c.strip())
        table = config.types if kind == "type" else config.consts
        table.setdefault(name, []).append(FamilyEntry(codes=key, value=value))
    logger.debug("model %s: %d type families, %d constant families", source, len(config.types), len(config.consts))
    return config


def load_model(path: Path) -> ModelConfig:
    if not path.is_file():
        raise NotFoundError(f"Model file '{path}' not found")
    return parse_model(path.read_text(encoding="utf-8"), str(path))
