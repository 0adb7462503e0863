import os
from pathlib import Path
from typing import Optional

from config.parser import parse_config
from config.settings import TestingSettings, Settings, BaseAppSettings
from exceptions import ConfigParseError
from schemas import RunConfig


def get_settings() -> BaseAppSettings:
    """
    Retrieve the process settings based on the current environment.

    This function reads the 'ENVIRONMENT' environment variable (defaulting to 'developing' if not set)
    and returns a corresponding settings instance. If the environment is 'testing', it returns an instance
    of TestingSettings; otherwise, it returns an instance of Settings.

    Returns:
        BaseAppSettings: The settings instance appropriate for the current environment.
    """
    environment = os.getenv("ENVIRONMENT", "developing")
    if environment == "testing":
        return TestingSettings()
    return Settings()


def get_run_config(
        path: Optional[str] = None,
        settings: Optional[BaseAppSettings] = None,
        seed: Optional[int] = None
) -> RunConfig:
    """
    Load the run configuration and apply seed overrides.

    The file at ``path`` is parsed with the run-config grammar; a missing path yields the
    built-in defaults. A seed set through ``TERRA_SEED`` replaces the file's environment and
    agent seeds, and an explicit ``seed`` argument replaces both.

    Args:
        path (str, optional): Config file location. Defaults to no file.
        settings (BaseAppSettings, optional): Process settings. Defaults to get_settings().
        seed (int, optional): Seed given on the command line.

    Returns:
        RunConfig: The validated configuration.
    """
    settings = settings or get_settings()
    if path is None:
        config = parse_config("")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except UnicodeDecodeError as error:
            raise ConfigParseError(f"not UTF-8 text: {error}")
        config = parse_config(text)

    override = seed if seed is not None else settings.TERRA_SEED
    if override is not None:
        config = config.with_seed(override)
    return config
