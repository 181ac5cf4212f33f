"""
Configuration module for clanroute.

This module handles loading defaults from environment variables (optionally
from a .env file). Command-line flags always take precedence over these values.
"""

import logging
import os

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

_TRUTHY = ("true", "1", "yes", "on")

DEFAULT_MAX_ROUNDS = 100_000
DEFAULT_GIRTH_RETRIES = 64


class Config:
    """
    Configuration manager for the application.
    """

    def __init__(self, env_file: str | None = None) -> None:
        """
        Initialize the configuration.

        Args:
            env_file: Path to the .env file.
        """
        if env_file:
            load_dotenv(env_file)
        else:
            load_dotenv()

        self._validate_config()

    @property
    def log_level(self) -> str:
        """Get the logging level."""
        return os.getenv("LOG_LEVEL", "INFO").upper()

    @property
    def log_file(self) -> str | None:
        """Get the optional log file path."""
        return os.getenv("LOG_FILE") or None

    @property
    def threads(self) -> int:
        """Get the worker count for pair fan-out."""
        return self._int_env("CLANROUTE_THREADS", os.cpu_count() or 1)

    @property
    def verify(self) -> bool:
        """Check if builders should assert their inequalities by default."""
        return os.getenv("CLANROUTE_VERIFY", "false").lower() in _TRUTHY

    @property
    def max_rounds(self) -> int:
        """Get the largest MWU round count accepted."""
        return self._int_env("CLANROUTE_MAX_ROUNDS", DEFAULT_MAX_ROUNDS)

    @property
    def girth_retries(self) -> int:
        """Get the retry budget of the girth instance generator."""
        return self._int_env("CLANROUTE_GIRTH_RETRIES", DEFAULT_GIRTH_RETRIES)

    @property
    def default_seed(self) -> int:
        """Get the seed used when no --seed flag is given."""
        return self._int_env("CLANROUTE_SEED", 0)

    def _int_env(self, name: str, default: int) -> int:
        raw = os.getenv(name)
        if raw is None or raw == "":
            return default
        try:
            return int(raw)
        except ValueError:
            return default

    def _validate_config(self) -> None:
        """Warn about numeric variables that cannot be parsed."""
        numeric_vars = [
            "CLANROUTE_THREADS",
            "CLANROUTE_MAX_ROUNDS",
            "CLANROUTE_GIRTH_RETRIES",
            "CLANROUTE_SEED",
        ]

        bad_vars = []
        for var in numeric_vars:
            raw = os.getenv(var)
            if raw:
                try:
                    int(raw)
                except ValueError:
                    bad_vars.append(var)

        if bad_vars:
            logger.warning(f"Ignoring unparsable environment variables: {bad_vars}")

    def get_run_defaults(self) -> dict[str, object]:
        """Get the defaults applied to every subcommand."""
        return {
            "seed": self.default_seed,
            "threads": self.threads,
            "verify": self.verify,
            "max_rounds": self.max_rounds,
            "girth_retries": self.girth_retries,
        }
