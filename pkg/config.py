"""
Configuration settings for plcert
"""

import os
from typing import Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_bool(name: str, default: str = "False") -> bool:
    return os.getenv(name, default).lower() in {"1", "true", "yes", "on"}


class Config:
    """Application configuration"""

    # Numeric settings
    DEFAULT_PRECISION: int = int(os.getenv("PLCERT_PRECISION", "192"))
    MIN_PRECISION: int = 32
    MAX_PRECISION: int = 4096
    DEFAULT_R: int = int(os.getenv("PLCERT_R", "2"))

    # Exact sequence cache
    CACHE_PATH: Optional[str] = os.getenv("PLCERT_CACHE_PATH")
    CACHE_HEADER: str = "PLCACHE v1"

    # Output
    OUTPUT_FORMAT: str = os.getenv("PLCERT_FORMAT", "text")
    SHOW_PROGRESS: bool = _env_bool("PLCERT_PROGRESS")

    # Remainder constants
    USE_PUBLISHED_CONSTANTS: bool = _env_bool("PLCERT_PUBLISHED_CONSTANTS")
    DR_INITIAL_CELLS: int = int(os.getenv("PLCERT_DR_CELLS", "256"))
    DR_EVAL_BUDGET: int = int(os.getenv("PLCERT_DR_BUDGET", "20000"))
    DR_TOLERANCE: float = 0.002
    DR_X_MIN_EXPONENT: int = 40
    DR_PRECISION: int = 64
    CR_GRID_POINTS: int = 2 ** 12

    # Certification
    LOGCONCAVE_EXACT_START: int = 12
    ANALYTIC_SEARCH_START: int = 1000
    ANALYTIC_SEARCH_LIMIT: int = 10 ** 6

    # Contour oracle
    ORACLE_MAX_N: int = int(os.getenv("PLCERT_ORACLE_MAX_N", "200"))
    ORACLE_TOLERANCE: float = 1e-9
    ORACLE_MAX_PANELS: int = 4000

    # Results store
    DATABASE_URL: Optional[str] = os.getenv("DATABASE_URL")
    SQLITE_DB_PATH: str = "plcert_results.db"
    STORE_RESULTS: bool = _env_bool("PLCERT_STORE")

    # Application settings
    DEBUG: bool = _env_bool("DEBUG")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "DEBUG" if DEBUG else "WARNING").upper()

    @classmethod
    def get_database_url(cls) -> str:
        """Get database URL with fallback to SQLite"""
        return cls.DATABASE_URL or f"sqlite:///{cls.SQLITE_DB_PATH}"

    @classmethod
    def store_enabled(cls, override: Optional[bool] = None) -> bool:
        """Whether certification runs and constants are persisted"""
        return cls.STORE_RESULTS if override is None else override
