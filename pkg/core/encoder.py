"""
Constellation encoders: two-axis grid, hybrid digital-analog map and N-dimensional grid.
All encoders accept scalars or numpy arrays of symbols.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.errors import DomainError, InvalidConfigError, SymbolRangeError
from core.model import SystemConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpacing:
    """
    In-phase spacing d1, quadrature spacing d2 and centring offset chi.
    chi=None means the default zero-mean offset -((q-1)d1 + (n-1)d2 i)/2.
    """
    d1: float
    d2: float
    chi: Optional[complex] = None

    def __post_init__(self):
        if not self.d1 > 0:
            raise InvalidConfigError(f"d1 must be positive, got {self.d1}")
        if not self.d2 >= 0:
            raise InvalidConfigError(f"d2 must be non-negative, got {self.d2}")

    def offset(self, q: float, n: int) -> complex:
        if self.chi is not None:
            return complex(self.chi)
        return -complex((q - 1) * self.d1, (n - 1) * self.d2) / 2.0


@dataclass(frozen=True)
class NDimSpacing:
    """Per-dimension spacings d_1..d_N of the base-q grid."""
    d: Tuple[float, ...]
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise InvalidConfigError(f"q must be >= 2, got {self.q}")
        if len(self.d) < 1 or any(not v > 0 for v in self.d):
            raise InvalidConfigError(f"spacings must be positive, got {self.d}")

    @property
    def N(self) -> int:
        return len(self.d)

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.d, dtype=float)


def equal_distance_spacing(cfg: SystemConfig) -> GridSpacing:
    """QAM-style baseline d1 = d2 = sqrt(12P/(q^2+n^2-2))."""
    d = math.sqrt(12.0 * cfg.power / (cfg.q ** 2 + cfg.n ** 2 - 2))
    return GridSpacing(d, d)


def _check_symbols(s, upper: int):
    arr = np.asarray(s)
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise SymbolRangeError("symbols must be integers")
        arr = arr.astype(np.int64)
    if np.any(arr < 0) or np.any(arr >= upper):
        raise SymbolRangeError(f"symbols must lie in [0, {upper})")
    return arr


def decompose(s, q: int, n: Optional[int] = None):
    """Base-q split s = c1 + c2*q with 0 <= c1 < q (and 0 <= c2 < n when n is given)."""
    if n is None:
        arr = np.asarray(s)
        if np.any(arr < 0):
            raise SymbolRangeError("symbols must be non-negative")
        arr = arr.astype(np.int64)
    else:
        arr = _check_symbols(s, q * n)
    c2, c1 = np.divmod(arr, q)
    if np.ndim(c1) == 0:
        return int(c1), int(c2)
    return c1, c2


def encode(s, sp: GridSpacing, cfg: SystemConfig):
    c1, c2 = decompose(s, cfg.q, cfg.n)
    point = np.asarray(c1) * sp.d1 + 1j * np.asarray(c2) * sp.d2 + sp.offset(cfg.q, cfg.n)
    return complex(point) if np.ndim(point) == 0 else point


def avg_power(sp: GridSpacing, cfg: SystemConfig) -> float:
    return (cfg.q ** 2 - 1) / 12.0 * sp.d1 ** 2 + (cfg.n ** 2 - 1) / 12.0 * sp.d2 ** 2


def hybrid_levels(s, q: float, n: int):
    """Residual and level index of a real input; the top boundary s = q*n stays on level n-1."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0) or np.any(arr > q * n) or np.any(~np.isfinite(arr)):
        raise DomainError(f"hybrid input must lie in [0, {q * n}]")
    level = np.minimum(np.floor(arr / q), n - 1)
    return arr - q * level, level


def encode_hybrid(s, sp: GridSpacing, q: float, n: int):
    """Analog residual on the real axis, digital level on the imaginary axis; default chi is 0."""
    residual, level = hybrid_levels(s, q, n)
    chi = sp.chi if sp.chi is not None else 0j
    point = residual * sp.d1 + 1j * level * sp.d2 + chi
    return complex(point) if np.ndim(point) == 0 else point


def hybrid_avg_power(sp: GridSpacing, q: float, n: int) -> float:
    return sp.d1 ** 2 * q ** 2 / 3.0 + sp.d2 ** 2 * (n - 1) * (2 * n - 1) / 6.0


def ndim_digits(s, q: int, N: int) -> np.ndarray:
    """Base-q digit vector (least significant first); trailing axis has length N."""
    arr = _check_symbols(s, q ** N)
    digits = np.empty(arr.shape + (N,), dtype=np.int64)
    rest = arr.copy() if arr.ndim else np.int64(arr)
    for i in range(N):
        rest, digits[..., i] = np.divmod(rest, q)
    return digits


def encode_ndim(s, sp: NDimSpacing) -> np.ndarray:
    return ndim_digits(s, sp.q, sp.N) * sp.vector
