"""
Runtime settings for the zero-sum toolkit.

Settings are read from ZEROSUM_* environment variables; a local .env file is
loaded first so the same knobs can be kept next to the reference database.
"""

import logging
import os
from typing import Any, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

VERSION = "1.0.0"
ENV_PREFIX = "ZEROSUM_"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

logger = logging.getLogger("zerosum-config")
logger.setLevel(logging.INFO)


class Settings(BaseModel):
    """Size caps, storage locations and logging options"""

    element_cap: int = Field(default=1 << 24, ge=1)
    dp_cell_cap: int = Field(default=1 << 26, ge=1)
    cap_search_limit: int = Field(default=4, ge=1)
    hypergraph_cap: int = Field(default=40, ge=1)
    subset_cap: int = Field(default=2_000_000, ge=1)
    database_url: str = "sqlite:///./zerosum_reference.db"
    certificate_dir: str = "./certificates"
    log_level: str = "INFO"
    log_file: str = ""


_settings: Optional[Settings] = None


def _read_env(field_name: str) -> Optional[str]:
    value = os.environ.get(ENV_PREFIX + field_name.upper())
    if value is None or value.strip() == "":
        return None
    return value.strip()


def load_settings() -> Settings:
    """
    Build settings from the environment

    Returns:
        A validated Settings instance; unset variables keep their defaults
    """
    values: dict[str, Any] = {}
    for name in Settings.model_fields:
        raw = _read_env(name)
        if raw is not None:
            values[name] = raw
    return Settings(**values)


def get_settings() -> Settings:
    """Return the process-wide settings, loading them on first use"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def override_settings(**changes: Any) -> Settings:
    """
    Replace selected settings for the current process (used by CLI flags)

    Args:
        changes: Field values to override; None values are ignored

    Returns:
        The updated settings
    """
    global _settings
    current = get_settings()
    updates = {key: value for key, value in changes.items() if value is not None}
    _settings = Settings(**{**current.model_dump(), **updates})
    return _settings


def reset_settings() -> None:
    """Forget cached settings so the next access re-reads the environment"""
    global _settings
    _settings = None


def configure_logging(level: Optional[str] = None) -> None:
    """
    Configure root logging with a stderr handler and an optional log file

    Args:
        level: Log level name overriding the configured one
    """
    settings = get_settings()
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
