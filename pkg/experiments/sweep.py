"""
Parameter sweeps over SNR, spacing design and decoder.

Every (snr, design, decoder) cell solves for its spacing, evaluates the closed-form
MSE and runs a Monte Carlo estimate with the shared seed. Cells that fail are kept
in the output with a status message instead of aborting the sweep.
"""
import asyncio
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from core.analytic_mse import mse_cauchy, mse_map, mse_ml
from core.encoder import GridSpacing, equal_distance_spacing
from core.errors import InvalidConfigError, OacError
from core.model import SystemConfig
from core.settings import DEFAULT_SEED, DEFAULT_TRIALS
from experiments.monte_carlo import DECODER_MAP, DECODER_ML, DECODERS, estimate_mse_async
from experiments.orchestrator import ShardOrchestrator
from solvers import solve_cauchy, solve_lambert, solve_map, solve_ml

logger = logging.getLogger(__name__)

DESIGN_OPTIMAL = "optimal"
DESIGN_EQUAL = "equal-distance"
DESIGN_LAMBERT = "closed-form-lambert"
DESIGNS = (DESIGN_OPTIMAL, DESIGN_EQUAL, DESIGN_LAMBERT)

COLUMNS = ["xi_db", "q", "n", "K", "design", "decoder", "d1", "d2", "mse_analytic",
           "mse_mc", "mse_stderr", "trials", "seed", "status"]
STATUS_OK = "ok"


@dataclass(frozen=True)
class SweepRecord:
    xi_db: float
    q: int
    n: int
    K: int
    design: str
    decoder: str
    d1: float
    d2: float
    mse_analytic: float
    mse_mc: float
    mse_stderr: float
    trials: int
    seed: int
    status: str = STATUS_OK

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    def as_row(self) -> Dict:
        return asdict(self)


def snr_range(start: float, stop: float, step: float) -> List[float]:
    """Inclusive dB grid start, start+step, ..., stop."""
    if not step > 0:
        raise InvalidConfigError(f"SNR step must be positive, got {step}")
    if stop < start:
        raise InvalidConfigError(f"empty SNR range {start}..{stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def design_spacing(cfg: SystemConfig, design: str, decoder: str) -> GridSpacing:
    if design == DESIGN_EQUAL:
        return equal_distance_spacing(cfg)
    if design == DESIGN_LAMBERT:
        return solve_lambert(cfg).spacing
    if design == DESIGN_OPTIMAL:
        if not cfg.is_gaussian:
            return solve_cauchy(cfg).spacing
        return (solve_map(cfg) if decoder == DECODER_MAP else solve_ml(cfg)).spacing
    raise InvalidConfigError(f"unknown design {design!r}, expected one of {DESIGNS}")


def analytic_mse(cfg: SystemConfig, sp: GridSpacing, decoder: str) -> float:
    if not cfg.is_gaussian:
        return mse_cauchy(sp, cfg).total
    if decoder == DECODER_MAP:
        return mse_map(sp, cfg).total
    return mse_ml(sp, cfg).total


def _check_labels(designs: Sequence[str], decoders: Sequence[str]):
    if not designs or not decoders:
        raise InvalidConfigError("sweep needs at least one design and one decoder")
    for design in designs:
        if design not in DESIGNS:
            raise InvalidConfigError(f"unknown design {design!r}, expected one of {DESIGNS}")
    for decoder in decoders:
        if decoder not in DECODERS:
            raise InvalidConfigError(f"unknown decoder {decoder!r}, expected one of {DECODERS}")


def _cell_config(template: SystemConfig, xi_db: float) -> SystemConfig:
    kind = "gaussian" if template.is_gaussian else "cauchy"
    return SystemConfig.from_snr_db(template.q, template.n, template.K, xi_db, template.power, kind)


async def _run_cell(template: SystemConfig, xi_db: float, design: str, decoder: str,
                    trials: int, seed: int, shard_size: Optional[int],
                    orchestrator: ShardOrchestrator) -> SweepRecord:
    base = dict(xi_db=xi_db, q=template.q, n=template.n, K=template.K,
                design=design, decoder=decoder, trials=trials, seed=seed)
    try:
        cfg = _cell_config(template, xi_db)
        sp = design_spacing(cfg, design, decoder)
        analytic = analytic_mse(cfg, sp, decoder)
        estimate = await estimate_mse_async(cfg, sp, decoder, trials, seed, shard_size, orchestrator)
    except OacError as e:
        logger.warning(f"Cell xi={xi_db} dB design={design} decoder={decoder} failed: {e}")
        return SweepRecord(d1=math.nan, d2=math.nan, mse_analytic=math.nan, mse_mc=math.nan,
                           mse_stderr=math.nan, status=f"failed: {e}", **base)
    return SweepRecord(d1=sp.d1, d2=sp.d2, mse_analytic=analytic, mse_mc=estimate.mean,
                       mse_stderr=estimate.stderr, **base)


async def sweep_async(template: SystemConfig, xi_db_values: Sequence[float],
                      designs: Sequence[str] = DESIGNS, decoders: Sequence[str] = (DECODER_ML,),
                      trials: Optional[int] = None, seed: Optional[int] = None,
                      shard_size: Optional[int] = None, workers: Optional[int] = None) -> List[SweepRecord]:
    if not xi_db_values:
        raise InvalidConfigError("sweep needs a non-empty SNR range")
    _check_labels(designs, decoders)
    trials = DEFAULT_TRIALS if trials is None else trials
    seed = DEFAULT_SEED if seed is None else seed
    orchestrator = ShardOrchestrator(workers)
    cells = len(xi_db_values) * len(designs) * len(decoders)

    logger.info("=== Sweep Started ===")
    logger.info(f"q={template.q} n={template.n} K={template.K}: {cells} cells, "
                f"{trials} trials each, seed {seed}")
    records = []
    try:
        for xi_db in xi_db_values:
            for design in designs:
                for decoder in decoders:
                    records.append(await _run_cell(template, float(xi_db), design, decoder,
                                                   trials, seed, shard_size, orchestrator))
    finally:
        failed = sum(1 for r in records if not r.ok)
        logger.info(f"Completed {len(records)}/{cells} cells ({failed} failed)")
        logger.info("=== Sweep Stopped ===")
    return records


def sweep(template: SystemConfig, xi_db_values: Sequence[float],
          designs: Sequence[str] = DESIGNS, decoders: Sequence[str] = (DECODER_ML,),
          trials: Optional[int] = None, seed: Optional[int] = None,
          shard_size: Optional[int] = None, workers: Optional[int] = None) -> List[SweepRecord]:
    return asyncio.run(sweep_async(template, xi_db_values, designs, decoders,
                                   trials, seed, shard_size, workers))


def records_to_frame(records: Sequence[SweepRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in records], columns=COLUMNS)


def snr_gain_db(xi_db: Sequence[float], mse_reference: Sequence[float],
                mse_candidate: Sequence[float]) -> np.ndarray:
    """
    Horizontal gain at matched MSE: for each reference point, how many dB less the
    candidate needs to reach the same MSE. NaN where the candidate curve does not
    cover that MSE level. Interpolation is linear in log-MSE.
    """
    xi = np.asarray(xi_db, dtype=float)
    ref = np.log(np.asarray(mse_reference, dtype=float))
    cand = np.minimum.accumulate(np.log(np.asarray(mse_candidate, dtype=float)))
    if not (xi.shape == ref.shape == cand.shape):
        raise InvalidConfigError("SNR grid and MSE curves must have the same length")
    gains = np.full(xi.shape, np.nan)
    for i, level in enumerate(ref):
        if np.isfinite(level) and cand[-1] <= level <= cand[0]:
            matched = np.interp(level, cand[::-1], xi[::-1])
            gains[i] = xi[i] - matched
    return gains


def gain_summary(records: Sequence[SweepRecord], decoder: str = DECODER_ML) -> pd.DataFrame:
    """Per-SNR matched-MSE gain of the optimal design over the equal-distance one."""
    frame = records_to_frame(records)
    frame = frame[(frame["decoder"] == decoder) & (frame["status"] == STATUS_OK)]
    pivot = frame.pivot_table(index="xi_db", columns="design", values="mse_mc")
    if DESIGN_OPTIMAL not in pivot or DESIGN_EQUAL not in pivot:
        return pd.DataFrame(columns=["xi_db", "gain_db"])
    pivot = pivot.dropna(subset=[DESIGN_OPTIMAL, DESIGN_EQUAL]).sort_index()
    gains = snr_gain_db(pivot.index.values, pivot[DESIGN_EQUAL].values, pivot[DESIGN_OPTIMAL].values)
    return pd.DataFrame({"xi_db": pivot.index.values, "gain_db": gains})
