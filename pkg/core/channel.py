"""
Synchronous multiple-access channel: superposition of node symbols plus additive noise.
Randomness comes from counter-based streams keyed by (seed, stream id).
"""
import logging
from typing import Optional, Sequence

import numpy as np

from core.encoder import GridSpacing, encode
from core.errors import DimensionMismatchError, InvalidConfigError
from core.model import CauchyNoise, GaussianNoise, NoiseModel, SystemConfig

logger = logging.getLogger(__name__)


class RngStream:
    """
    Reproducible random stream. Identical (seed, stream_id) pairs give identical
    sequences; distinct stream ids give independent ones. Not meant to be shared
    between threads.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0 or stream_id < 0:
            raise InvalidConfigError("seed and stream id must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def superimpose(points: Sequence[complex]):
    """Exact sum over the node axis (the last axis for arrays)."""
    arr = np.asarray(points)
    if arr.size == 0 or arr.shape[-1] == 0:
        raise DimensionMismatchError("cannot superimpose an empty set of points")
    total = arr.sum(axis=-1)
    return complex(total) if np.ndim(total) == 0 else total


def sample_noise(model: NoiseModel, rng: RngStream, size: Optional[int] = None):
    """
    Gaussian: independent N(0, sigma2/2) per component.
    Cauchy: independent gamma*tan(pi*(u - 1/2)) per component.
    """
    shape = () if size is None else (size,)
    if isinstance(model, GaussianNoise):
        draws = rng.generator.standard_normal(shape + (2,))
        draws = draws * np.sqrt(model.sigma2 / 2.0)
    elif isinstance(model, CauchyNoise):
        u = rng.generator.random(shape + (2,))
        draws = model.gamma * np.tan(np.pi * (u - 0.5))
    else:
        raise InvalidConfigError(f"unknown noise model {model!r}")
    noise = draws[..., 0] + 1j * draws[..., 1]
    return complex(noise) if size is None else noise


def transmit(symbols, sp: GridSpacing, cfg: SystemConfig, rng: RngStream):
    """
    r = sum_k encode(s_k) + z. symbols is a length-K sequence or a (trials, K) array;
    one noise sample is drawn per row.
    """
    arr = np.asarray(symbols)
    if arr.ndim == 0 or arr.shape[-1] != cfg.K:
        raise DimensionMismatchError(f"expected {cfg.K} symbols per transmission, got shape {arr.shape}")
    clean = superimpose(encode(arr, sp, cfg))
    if arr.ndim == 1:
        return clean + sample_noise(cfg.noise, rng)
    return clean + sample_noise(cfg.noise, rng, size=arr.shape[0])
