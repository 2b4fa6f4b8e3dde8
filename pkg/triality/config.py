"""
Configuration module for the triality toolkit

Centralizes environment variables, verification caps, sampling defaults and
paths. Provides configuration validation.
"""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _optional_int(name: str) -> Optional[int]:
    raw = os.getenv(name, '').strip()
    return int(raw) if raw else None


class Config:
    """Configuration class for verification settings"""

    # Corpus and reports
    CORPUS_DIR: str = os.getenv('TRIALITY_CORPUS', 'corpus')
    REPORT_DIR: str = os.getenv('TRIALITY_REPORT_DIR', 'reports')

    # Reproducibility
    SEED: int = int(os.getenv('TRIALITY_SEED', '0'))

    # Size caps
    MAX_LOOP_ORDER: int = int(os.getenv('TRIALITY_MAX_LOOP_ORDER', '16'))
    MAX_GROUP_ORDER: int = int(os.getenv('TRIALITY_MAX_GROUP_ORDER', '256'))
    MULT_GROUP_CAP: int = int(os.getenv('TRIALITY_MULT_GROUP_CAP', '1000000'))
    # W(Q) is tabulated in full only up to this order
    W_TABLE_LIMIT: int = int(os.getenv('TRIALITY_W_TABLE_LIMIT', '512'))

    # Sampling
    EXHAUSTIVE_LIMIT: int = int(os.getenv('TRIALITY_EXHAUSTIVE_LIMIT', '100000'))
    SAMPLES: int = int(os.getenv('TRIALITY_SAMPLES', '10000'))
    CONV_SAMPLES: int = int(os.getenv('TRIALITY_CONV_SAMPLES', '1000'))

    # PBW degree override (None = per-algebra default)
    DEGREE: Optional[int] = _optional_int('TRIALITY_DEGREE')

    # Logging
    LOG_LEVEL: str = os.getenv('TRIALITY_LOG_LEVEL', 'INFO').upper()

    @classmethod
    def validate(cls) -> list[str]:
        """Validate configuration values, returning a list of problems"""
        problems = []

        positive_keys = [
            'MAX_LOOP_ORDER',
            'MAX_GROUP_ORDER',
            'MULT_GROUP_CAP',
            'W_TABLE_LIMIT',
            'EXHAUSTIVE_LIMIT',
            'SAMPLES',
            'CONV_SAMPLES',
        ]

        for key in positive_keys:
            if getattr(cls, key) <= 0:
                problems.append(f"{key} must be positive")

        if cls.DEGREE is not None and not 0 <= cls.DEGREE <= 3:
            problems.append("DEGREE must lie in 0..3")

        if not isinstance(logging.getLevelName(cls.LOG_LEVEL), int):
            problems.append(f"unknown log level {cls.LOG_LEVEL}")

        return problems

    @classmethod
    def log_level(cls) -> int:
        level = logging.getLevelName(cls.LOG_LEVEL)
        return level if isinstance(level, int) else logging.INFO

    @classmethod
    def report_dir(cls) -> Path:
        """Create the report directory on demand"""
        path = Path(cls.REPORT_DIR)
        path.mkdir(parents=True, exist_ok=True)
        return path


# Initialize configuration
config = Config()

# Export commonly used values
CORPUS_DIR = config.CORPUS_DIR
DEFAULT_SEED = config.SEED
MAX_LOOP_ORDER = config.MAX_LOOP_ORDER
MAX_GROUP_ORDER = config.MAX_GROUP_ORDER
EXHAUSTIVE_LIMIT = config.EXHAUSTIVE_LIMIT
DEFAULT_SAMPLES = config.SAMPLES
