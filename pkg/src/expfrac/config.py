"""Configuration management for expfrac."""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Hard ceiling on adaptive panels
MAX_SUBDIVISIONS_LIMIT = 2**16


class Settings(BaseSettings):
    """Runtime settings loaded from EXPFRAC_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="EXPFRAC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Quadrature defaults
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = Field(default=1000, gt=0, le=MAX_SUBDIVISIONS_LIMIT)

    # Absolute floor of the verdict margin
    verdict_floor: float = Field(default=1e-8, gt=0.0)

    # Sweep fan-out; 1 means single-threaded
    workers: int = Field(default=1, ge=1)

    # Logging
    log_level: str = "WARNING"
    log_format: str = "console"

    @field_validator("abs_tol", "rel_tol")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        """Tolerances must lie strictly between 0 and 1."""
        if not 0.0 < v < 1.0:
            raise ValueError(f"tolerance must lie in (0, 1), got {v}")
        return v

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        valid_formats = {"console", "json"}
        if v.lower() not in valid_formats:
            raise ValueError(
                f"Invalid EXPFRAC_LOG_FORMAT: '{v}'. "
                f"Must be one of: {', '.join(sorted(valid_formats))}"
            )
        return v.lower()

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if v.upper() not in valid_levels:
            raise ValueError(
                f"Invalid EXPFRAC_LOG_LEVEL: '{v}'. "
                f"Must be one of: {', '.join(sorted(valid_levels))}"
            )
        return v.upper()


# Lazy settings initialization
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the settings instance, creating it if needed."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next access re-reads the environment."""
    global _settings
    _settings = None


def override_settings(**values: object) -> Settings:
    """Replace the cached settings with a copy carrying the given values."""
    global _settings
    _settings = get_settings().model_copy(update=values)
    return _settings
