"""
Application configuration using Pydantic Settings.
Loads run defaults (LexDFS runs, trials, seed, windows, diameter mode) from the environment.
"""
from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Run defaults loaded from LEXCLUSTER_* environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="LEXCLUSTER_",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    debug: bool = False
    log_level: str = "INFO"

    # LexDFS scoring
    runs: int = 20
    seed: int = 0
    workers: int = 1

    # Experiments
    trials: int = 20
    windows: str = "0,20,1%"  # comma-separated; "p%" means 2w ~ p% of m
    dedup_profile: bool = True
    ordering_stride: int = 1  # keep the edge ranking of every k-th run

    # Quality evaluation
    diameter_mode: str = "exact"
    all_pairs_threshold: int = 256
    checkpoint_stride: int = 0  # 0 picks sqrt(|events|)

    # Output
    out_dir: str = "results"

    @property
    def window_list(self) -> list[str]:
        """Parse comma-separated window tokens into a list."""
        return [token.strip() for token in self.windows.split(",") if token.strip()]


@lru_cache
def get_settings() -> Settings:
    """Cached settings instance to avoid reloading env on each call."""
    return Settings()
