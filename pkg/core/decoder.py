"""
ML and MAP estimators of the superimposed grid, function reconstruction,
the hybrid clipped-linear decoder and N-dimensional slicing.
"""
import logging
import math

import numpy as np

from core.encoder import GridSpacing, NDimSpacing
from core.errors import DimensionMismatchError, UnsupportedNoiseError
from core.model import SystemConfig

logger = logging.getLogger(__name__)


def slice_axis(value, spacing: float, count: int, scale: float = 1.0):
    """
    Region index of value on the grid {0, spacing, ..., (count-1)*spacing}.

    Regions are scaled by `scale` about the grid centre c = (count-1)/2, so scale=1
    is nearest-level slicing and scale=eta shrinks estimates toward the prior mean.
    End regions are half-lines and ties go to the lower index.
    """
    center = (count - 1) / 2.0
    arr = np.asarray(value, dtype=float)
    if spacing <= 0:
        index = np.full(arr.shape, math.ceil(center - 0.5), dtype=np.int64)
    else:
        u = center + (arr / spacing - center) / scale
        index = np.clip(np.ceil(u - 0.5), 0, count - 1).astype(np.int64)
    return int(index) if index.ndim == 0 else index


def _slice_received(r, sp: GridSpacing, cfg: SystemConfig, scale: float):
    y = np.asarray(r, dtype=complex) - cfg.K * sp.offset(cfg.q, cfg.n)
    a = slice_axis(y.real, sp.d1, cfg.N1K, scale)
    b = slice_axis(y.imag, sp.d2, cfg.N2K, scale)
    return a + cfg.q * b


def decode_ml(r, sp: GridSpacing, cfg: SystemConfig):
    """f_hat = a + q*b after removing the aggregate offset K*chi."""
    return _slice_received(r, sp, cfg, 1.0)


def decode_map(r, sp: GridSpacing, cfg: SystemConfig):
    if not cfg.is_gaussian:
        raise UnsupportedNoiseError("MAP region scaling is defined for Gaussian noise only")
    return _slice_received(r, sp, cfg, cfg.eta)


def decode_hybrid(r, sp: GridSpacing, q: float, n: int, K: int):
    chi = sp.chi if sp.chi is not None else 0j
    y = np.asarray(r, dtype=complex) - K * chi
    real_part = np.clip(y.real / sp.d1, 0.0, K * q)
    level = slice_axis(y.imag, sp.d2, K * (n - 1) + 1)
    estimate = real_part + q * np.asarray(level)
    return float(estimate) if np.ndim(estimate) == 0 else estimate


def decode_ndim(r, sp: NDimSpacing, cfg: SystemConfig):
    arr = np.asarray(r, dtype=float)
    if arr.shape[-1] != sp.N:
        raise DimensionMismatchError(f"expected {sp.N} received components, got {arr.shape[-1]}")
    count = cfg.K * (sp.q - 1) + 1
    weights = sp.q ** np.arange(sp.N, dtype=np.int64)
    indices = np.stack([np.asarray(slice_axis(arr[..., i], d, count)) for i, d in enumerate(sp.d)], axis=-1)
    estimate = (indices * weights).sum(axis=-1)
    return int(estimate) if np.ndim(estimate) == 0 else estimate
