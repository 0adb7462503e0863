import os
from pathlib import Path
from typing import Any, Optional

from pydantic_settings import BaseSettings


class BaseAppSettings(BaseSettings):
    BASE_DIR: Path = Path(__file__).parent.parent
    OUTPUT_DIR: str = str(BASE_DIR.parent / "runs")
    LOG_LEVEL: str = "INFO"
    TERRA_SEED: Optional[int] = None


class Settings(BaseAppSettings):
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")


class TestingSettings(BaseAppSettings):
    LOG_LEVEL: str = "WARNING"

    def model_post_init(self, __context: dict[str, Any] | None = None) -> None:
        object.__setattr__(self, "OUTPUT_DIR", str(self.BASE_DIR / "tests" / "output"))
