"""
Configuration - Environment-driven settings for quadcond (.env aware)
"""
import logging
import os
from dataclasses import dataclass, asdict
from functools import lru_cache
from typing import Any, Dict

from dotenv import load_dotenv

from errors import UserInputError

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'
STRATEGIES = ('lowest', 'highest', 'hessian')


@dataclass(frozen=True)
class Settings:
    """Runtime settings read from the environment"""
    factor_bound: int = 10 ** 6
    strategy: str = 'lowest'
    log_dir: str = 'logs'
    log_level: str = 'WARNING'
    workers: int = 1
    max_variables: int = 8

    def to_dict(self) -> Dict[str, Any]:
        """Convert Settings to dictionary"""
        return asdict(self)

    @classmethod
    def from_env(cls) -> 'Settings':
        """
        Build settings from QUADCOND_* environment variables

        Returns:
            Settings: validated settings
        """
        load_dotenv()
        try:
            settings = cls(
                factor_bound=int(os.getenv('QUADCOND_FACTOR_BOUND', 10 ** 6)),
                strategy=os.getenv('QUADCOND_STRATEGY', 'lowest').strip().lower(),
                log_dir=os.getenv('QUADCOND_LOG_DIR', 'logs'),
                log_level=os.getenv('QUADCOND_LOG_LEVEL', 'WARNING').strip().upper(),
                workers=int(os.getenv('QUADCOND_WORKERS', 1)),
                max_variables=int(os.getenv('QUADCOND_MAX_VARIABLES', 8)),
            )
        except ValueError as e:
            raise UserInputError(f"invalid numeric setting: {e}") from e

        if settings.strategy not in STRATEGIES:
            raise UserInputError(f"QUADCOND_STRATEGY must be one of {STRATEGIES}, got {settings.strategy!r}")
        if settings.factor_bound < 2:
            raise UserInputError("QUADCOND_FACTOR_BOUND must be at least 2")
        if settings.workers < 1:
            raise UserInputError("QUADCOND_WORKERS must be positive")
        return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, read once"""
    return Settings.from_env()


def configure_logging(level: str = None) -> None:
    """Install the root logging configuration"""
    level = level or get_settings().log_level
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT)


if __name__ == "__main__":
    for key, value in get_settings().to_dict().items():
        print(f"  {key}: {value}")
