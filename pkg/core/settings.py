"""
Environment-driven defaults.
Values are read once at import time after loading an optional .env file.
"""
import os
import logging

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


DEFAULT_SEED = _int_env("OAC_SEED", 20240607)
DEFAULT_TRIALS = _int_env("OAC_TRIALS", 50_000)
DEFAULT_SHARD_SIZE = _int_env("OAC_SHARD_SIZE", 10_000)
DEFAULT_WORKERS = _int_env("OAC_WORKERS", 4)
LOG_LEVEL = os.getenv("OAC_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("OAC_LOG_FILE")
