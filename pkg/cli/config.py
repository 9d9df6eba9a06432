"""
Run configuration shared by JSON config files and command-line flags.

A JSON config holds the same keys as the long flags (dashes become underscores).
Precedence: explicit flag > config file > environment default > built-in default.
"""
import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from core.errors import InvalidConfigError

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
NOISE_KINDS = ("gaussian", "cauchy")
METHODS = ("ml", "map", "lambert", "cauchy")


class UsageError(InvalidConfigError):
    """Missing or contradictory command-line input."""


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


@dataclass(frozen=True)
class RunConfig:
    command: Optional[str] = None
    q: Optional[int] = None
    n: Optional[int] = None
    K: Optional[int] = None
    N: Optional[int] = None
    snr_db: Optional[float] = None
    power: Optional[float] = None
    sigma2: Optional[float] = None
    gamma: Optional[float] = None
    noise: Optional[str] = None
    method: Optional[str] = None
    decoder: Optional[str] = None
    d1: Optional[float] = None
    d2: Optional[float] = None
    mc_trials: Optional[int] = None
    snr_db_from: Optional[float] = None
    snr_db_to: Optional[float] = None
    snr_db_step: Optional[float] = None
    designs: Optional[Tuple[str, ...]] = None
    decoders: Optional[Tuple[str, ...]] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    shard_size: Optional[int] = None
    workers: Optional[int] = None
    out: Optional[str] = None
    format: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        values = dict(data)
        for key in ("designs", "decoders"):
            if values.get(key) is not None:
                values[key] = tuple(values[key])
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("designs", "decoders"):
            if data[key] is not None:
                data[key] = list(data[key])
        return {k: v for k, v in data.items() if v is not None}

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise UsageError(f"config {path} must hold a JSON object")
        logger.info(f"Loaded run config from {path}")
        return cls.from_dict(data)

    def save(self, path: str):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Copy with every non-None override applied."""
        values = asdict(self)
        for key, value in overrides.items():
            if key in values and value is not None:
                values[key] = tuple(value) if key in ("designs", "decoders") else value
        return RunConfig(**values)

    def validate(self) -> "RunConfig":
        """Range checks on the values that are set; raise UsageError on the first violation."""
        minimum = {"q": 2, "n": 2, "K": 1, "N": 2, "mc_trials": 1, "trials": 1, "shard_size": 1, "workers": 1}
        for name, low in minimum.items():
            value = getattr(self, name)
            if value is not None and value < low:
                raise UsageError(f"{_flag(name)} must be >= {low}, got {value}")
        for name in ("power", "sigma2", "gamma", "snr_db_step", "d1", "d2"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise UsageError(f"{_flag(name)} must be positive, got {value}")
        return self

    def require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            flags = ", ".join(_flag(name) for name in missing)
            raise UsageError(f"missing required option(s): {flags}")
