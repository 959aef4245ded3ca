"""
Runtime configuration for sfa-simulation.

Settings come from ``SFASIM_*`` environment variables or a ``.env`` file in
the working directory. Every field has a default, so nothing needs to be set.
"""
import logging
import time
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import DeadlineExceeded

# Load environment variables from .env file or system
load_dotenv()


class Settings(BaseSettings):
    """Tunables shared by the library and the CLI."""

    model_config = SettingsConfigDict(env_prefix="SFASIM_", env_file=".env", extra="ignore")

    # Resource guards
    minterm_cap: int = Field(default=2**20, ge=1)
    timeout_ms: int = Field(default=100_000, ge=1)

    # Enumeration-based checks
    enum_domain_cap: int = Field(default=2**16, ge=1)
    max_word_len: int = Field(default=8, ge=0)

    debug_invariants: bool = False
    log_level: str = "INFO"

    bench_jobs: int = Field(default=1, ge=1)
    reduction_max_iters: int = Field(default=10, ge=1)

    # Runs slower than this are logged at WARNING
    slow_run_ms: float = 5_000.0


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the process-wide settings instance."""
    return Settings()


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging for command-line use."""
    logging.basicConfig(
        level=getattr(logging, (level or get_settings().log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


class Deadline:
    """Cooperative timeout checked from inside long-running loops."""

    def __init__(self, timeout_ms: Optional[float]):
        self.timeout_ms = timeout_ms
        self._expires = None if timeout_ms is None else time.perf_counter() + timeout_ms / 1000.0

    def check(self) -> None:
        if self._expires is not None and time.perf_counter() > self._expires:
            raise DeadlineExceeded(self.timeout_ms)

    @classmethod
    def none(cls) -> "Deadline":
        return cls(None)
