"""
Monte Carlo estimate of the decoded-sum MSE.

Trials are split into shards; shard j always draws from RngStream(seed, j), so
two estimates with the same seed see the same symbols and noise shape no matter
how many workers run them. Per-shard moment sums are reduced with math.fsum in
shard order.
"""
import asyncio
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.channel import RngStream, transmit
from core.decoder import decode_map, decode_ml
from core.encoder import GridSpacing
from core.errors import InvalidConfigError, UnsupportedNoiseError
from core.model import SystemConfig
from core.settings import DEFAULT_SEED, DEFAULT_SHARD_SIZE, DEFAULT_TRIALS
from experiments.orchestrator import ShardOrchestrator

logger = logging.getLogger(__name__)

DECODER_ML = "ML"
DECODER_MAP = "MAP"
DECODERS = (DECODER_ML, DECODER_MAP)


@dataclass(frozen=True)
class MseEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int


def shard_sizes(trials: int, shard_size: int) -> List[int]:
    if trials < 1:
        raise InvalidConfigError(f"trials must be >= 1, got {trials}")
    if shard_size < 1:
        raise InvalidConfigError(f"shard size must be >= 1, got {shard_size}")
    full, rest = divmod(trials, shard_size)
    return [shard_size] * full + ([rest] if rest else [])


def _decoder(cfg: SystemConfig, decoder: str):
    if decoder == DECODER_ML:
        return decode_ml
    if decoder == DECODER_MAP:
        if not cfg.is_gaussian:
            raise UnsupportedNoiseError("MAP decoding needs Gaussian noise")
        return decode_map
    raise InvalidConfigError(f"unknown decoder {decoder!r}, expected one of {DECODERS}")


def run_shard(cfg: SystemConfig, sp: GridSpacing, decoder: str, seed: int,
              stream_id: int, size: int) -> Tuple[float, float]:
    """(sum of e^2, sum of e^4) over one shard of trials."""
    decode = _decoder(cfg, decoder)
    rng = RngStream(seed, stream_id)
    symbols = rng.generator.integers(0, cfg.symbol_count, size=(size, cfg.K))
    received = transmit(symbols, sp, cfg, rng)
    errors = (np.asarray(decode(received, sp, cfg)) - symbols.sum(axis=1)).astype(float)
    squared = errors ** 2
    return math.fsum(squared), math.fsum(squared ** 2)


def reduce_shards(moments: List[Tuple[float, float]], trials: int, seed: int) -> MseEstimate:
    mean = math.fsum(m[0] for m in moments) / trials
    if trials == 1:
        return MseEstimate(mean=mean, stderr=math.inf, trials=trials, seed=seed)
    second = math.fsum(m[1] for m in moments) / trials
    variance = max(second - mean ** 2, 0.0) * trials / (trials - 1)
    return MseEstimate(mean=mean, stderr=math.sqrt(variance / trials), trials=trials, seed=seed)


async def estimate_mse_async(cfg: SystemConfig, sp: GridSpacing, decoder: str = DECODER_ML,
                             trials: Optional[int] = None, seed: Optional[int] = None,
                             shard_size: Optional[int] = None,
                             orchestrator: Optional[ShardOrchestrator] = None) -> MseEstimate:
    trials = DEFAULT_TRIALS if trials is None else trials
    seed = DEFAULT_SEED if seed is None else seed
    sizes = shard_sizes(trials, DEFAULT_SHARD_SIZE if shard_size is None else shard_size)
    _decoder(cfg, decoder)
    orchestrator = orchestrator or ShardOrchestrator()

    jobs = [lambda j=j, size=size: run_shard(cfg, sp, decoder, seed, j, size)
            for j, size in enumerate(sizes)]
    moments = await orchestrator.run(jobs)
    estimate = reduce_shards(moments, trials, seed)
    logger.debug(f"MC {decoder} q={cfg.q} n={cfg.n} K={cfg.K}: mean={estimate.mean:.6g} "
                 f"se={estimate.stderr:.3g} over {trials} trials in {len(sizes)} shards")
    return estimate


def estimate_mse(cfg: SystemConfig, sp: GridSpacing, decoder: str = DECODER_ML,
                 trials: Optional[int] = None, seed: Optional[int] = None,
                 shard_size: Optional[int] = None, workers: Optional[int] = None) -> MseEstimate:
    """Synchronous wrapper; must not be called from inside a running event loop."""
    return asyncio.run(estimate_mse_async(cfg, sp, decoder, trials, seed, shard_size,
                                          ShardOrchestrator(workers)))
