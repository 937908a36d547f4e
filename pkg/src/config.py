# Runtime settings loaded from the environment and an optional .env file
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Limits and paths used across keycast; every field has a KEYCAST_* variable."""

    enum_cap: int = Field(24, ge=0, le=30)
    witness_cap: int = Field(16, ge=0, le=30)
    search_cap: int = Field(12, ge=0, le=30)
    budget: int = Field(10_000_000, ge=1)
    key_budget: int = Field(1_000_000, ge=1)
    chunk_bits: int = Field(16, ge=1, le=26)
    jobs: int = Field(1, ge=1)
    report_dir: str = "data/reports"
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """Build settings from KEYCAST_* variables (after loading .env)."""
        load_dotenv(env_file)
        values = {}
        for name in cls.model_fields:
            raw = os.getenv(f"KEYCAST_{name.upper()}")
            if raw is not None and raw != "":
                values[name] = raw
        return cls.model_validate(values)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, read once."""
    return Settings.from_env()


def reset_settings() -> None:
    """Forget cached settings so the next get_settings() re-reads the environment."""
    get_settings.cache_clear()
