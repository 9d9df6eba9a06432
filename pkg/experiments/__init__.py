"""Monte Carlo estimation and SNR sweeps."""
from experiments.monte_carlo import MseEstimate, estimate_mse, estimate_mse_async
from experiments.orchestrator import ShardOrchestrator
from experiments.sweep import SweepRecord, records_to_frame, snr_gain_db, sweep

__all__ = ['MseEstimate', 'estimate_mse', 'estimate_mse_async', 'ShardOrchestrator',
           'SweepRecord', 'records_to_frame', 'snr_gain_db', 'sweep']
