"""Application settings configuration.

This module defines the benchmark's settings using Pydantic.
The settings can be configured via environment variables and
include configurations for logging, scene geometry, persistence
and the defaults of the command-line harness.

Dependencies:
    - enum: For defining enumeration types.
    - pydantic_settings: For creating settings with validation.

Classes:
    LogLevel: Enum representing possible log levels for the application.
    Settings: Pydantic class for application settings.
"""

import enum

from pydantic_settings import BaseSettings, SettingsConfigDict


class LogLevel(str, enum.Enum):
    """Possible log levels."""

    NOTSET = "NOTSET"
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    FATAL = "FATAL"


class Settings(BaseSettings):
    """Application settings.

    These parameters can be configured
    with environment variables. Command-line flags take precedence.
    """

    # quantity of worker processes for the per-scene parallel map
    workers_count: int = 1

    log_level: LogLevel = LogLevel.INFO

    # Scene sampling
    dt: float = 0.4
    obs_len: int = 9
    pred_len: int = 12

    # Decimals written for coordinates
    precision: int = 2

    # Harness defaults
    seed: int = 0
    goal_distance: float = 20.0
    collision_threshold: float = 0.1
    modes: int = 1
    jitter_sigma: float = 0.05
    topk_default: int = 3

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="CROWDBENCH_",
        env_file_encoding="utf-8",
    )


settings = Settings()
