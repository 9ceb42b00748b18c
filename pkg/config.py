import os

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional

from app.lib.exceptions import UsageError


class Settings(BaseSettings):
    # group and field
    CARTAN_TYPE: str = Field(default="A2", description="Cartan type label, e.g. A3 or B2")
    J: str = Field(default="", description="comma list of simple indices generating W_J")
    W: str = Field(default="", description="word of w; empty means the longest element")
    FIELD: str = Field(default="Q", description="Q, F3, F5 or Fp:<p>")

    # computation config
    DMAX_SLACK: int = Field(default=0, ge=0)

    # output config
    FMT: str = "text"
    OUT: Optional[str] = None

    # logging config
    LOG_CONFIG: str = "logging.ini"
    LOG_LEVEL: Optional[str] = None

    # Pydantic model config
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

# function for getting config with cache
from functools import lru_cache

@lru_cache()
def get_settings() -> Settings:
    return Settings()


def load_settings(path: Optional[str] = None) -> Settings:
    """Settings from an explicit KEY=value manifest, or the cached defaults."""
    if path is None:
        return get_settings()
    if not os.path.isfile(path):
        raise UsageError(f"config file {path!r} not found")
    return Settings(_env_file=path)
