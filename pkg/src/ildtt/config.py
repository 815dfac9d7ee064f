from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings


class Config(BaseSettings):
    """Kernel configuration loaded from environment variables."""

    fuel: int = Field(8, ge=1)
    eta: bool = True
    ext: bool = False
    step_ceiling: int = Field(200_000, ge=1)
    backend: str = "pset"
    max_dim: int = Field(3, ge=1)
    max_bang_depth: int = Field(2, ge=0)
    corpus_dir: Path = Path("corpus")
    workers: int = Field(4, ge=1)
    log_level: str = "WARNING"
    debug: bool = False

    model_config = {
        "env_file": [".env"],
        "env_prefix": "ILDTT_",
        "extra": "ignore",
    }
