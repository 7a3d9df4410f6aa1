"""
Configuration settings for toriq
"""
import sys

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings, read from the environment and an optional .env file."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    PROJECT_NAME: str = "toriq"

    # Output
    TORIQ_COLOR: bool = Field(default=True, description="Set to 0 to disable ANSI colour")
    TORIQ_SVG_SIZE: int = Field(default=480, ge=64, description="Slice plot size in pixels")

    # Logging
    TORIQ_LOG_LEVEL: str = Field(default="WARNING")
    TORIQ_LOG_FILE: str = Field(default="", description="Optional rotating log file")

    # Computation
    # Thread count for independent sub-searches; results never depend on it.
    TORIQ_WORKERS: int = Field(default=1, ge=1)
    TORIQ_MAX_CELLS: int = Field(default=20000, ge=1)

    @property
    def color_enabled(self) -> bool:
        """ANSI colour only when enabled and writing to a terminal."""
        return self.TORIQ_COLOR and sys.stdout.isatty()

    @property
    def log_level(self) -> str:
        level = (self.TORIQ_LOG_LEVEL or "WARNING").strip().upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            return "WARNING"
        return level


settings = Settings()
