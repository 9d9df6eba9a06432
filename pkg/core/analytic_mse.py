"""
Closed-form MSE of the decoded sum: Gaussian Q-function sums for ML and MAP decoding,
the MAP approximation error bound, the N-dimensional grid MSE and the Cauchy analogue.

Gaussian arguments carry sqrt(2)*sigma because each component has variance sigma2/2.
The N-dimensional MSE follows its own convention (weights q^(i-1), no factor 2, no sqrt(2)).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import erfc

from core.encoder import GridSpacing, NDimSpacing
from core.errors import DimensionMismatchError, UnsupportedNoiseError
from core.model import CoefficientTable, SystemConfig, coefficient_table, odd_weights

logger = logging.getLogger(__name__)

# exp(-745) underflows double precision
UNDERFLOW_EXPONENT = 745.0
_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class MseBreakdown:
    real_term: float
    imag_term: float
    total: float
    error_bound: Optional[float] = None


def qfunc(x):
    """Gaussian upper tail Q(x) = erfc(x/sqrt(2))/2."""
    value = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(value) if np.ndim(value) == 0 else value


def _q_sum(x, weights: np.ndarray, odd: np.ndarray, denom: float) -> np.ndarray:
    """sum_m weights_m * Q(odd_m * x / denom) for every entry of x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if denom == 0:
        return np.where(x == 0, 0.5 * weights.sum(), 0.0)
    positive = x[x > 0]
    active = len(odd)
    if positive.size and positive.size == x.size:
        # Q(u) ~ exp(-u^2/2): drop indices whose argument underflows for every x
        limit = math.sqrt(2.0 * UNDERFLOW_EXPONENT) * denom / positive.min()
        active = int(np.searchsorted(odd, limit, side="right"))
    if active == 0:
        return np.zeros_like(x)
    w, o = weights[:active], odd[:active]
    out = np.empty_like(x)
    step = max(1, _CHUNK_ELEMENTS // active)
    for start in range(0, x.size, step):
        chunk = x[start:start + step]
        out[start:start + step] = (w * qfunc(np.outer(chunk, o) / denom)).sum(axis=1)
    return out


def _scalar(values):
    return float(values[0]) if np.size(values) == 1 else values


def mu(x, table: CoefficientTable, sigma: float):
    """2 * sum_m alpha_m Q((2m-1) x / (sqrt(2) sigma)) over m = 1..N-1."""
    return _scalar(2.0 * _q_sum(x, table.alpha, table.beta, math.sqrt(2.0) * sigma))


def omega(x, count: int, eta: float, sigma: float):
    """2 * sum_{m<=count} beta_m Q(eta beta_m x / (sqrt(2) sigma))."""
    table = odd_weights(count)
    return _scalar(2.0 * _q_sum(eta * np.asarray(x, dtype=float), table.beta, table.beta,
                                math.sqrt(2.0) * sigma))


def _require_gaussian(cfg: SystemConfig, what: str):
    if not cfg.is_gaussian:
        raise UnsupportedNoiseError(f"{what} is defined for Gaussian noise only")


def mse_ml_values(d1, d2, cfg: SystemConfig):
    _require_gaussian(cfg, "ML MSE")
    sigma = math.sqrt(cfg.sigma2)
    return (mu(d1, coefficient_table(cfg.N1K), sigma)
            + cfg.q ** 2 * np.asarray(mu(d2, coefficient_table(cfg.N2K), sigma)))


def mse_ml(sp: GridSpacing, cfg: SystemConfig) -> MseBreakdown:
    _require_gaussian(cfg, "ML MSE")
    sigma = math.sqrt(cfg.sigma2)
    real_term = mu(sp.d1, coefficient_table(cfg.N1K), sigma)
    imag_term = cfg.q ** 2 * mu(sp.d2, coefficient_table(cfg.N2K), sigma)
    return MseBreakdown(real_term, imag_term, real_term + imag_term)


def map_tail_bound(d: float, levels: int, K: int, sigma: float, eta: float) -> float:
    """
    Bound on the per-axis gap between the exact MAP error sum and its 2*levels-term
    approximation: tail of the truncated series plus the prior-mass term.
    """
    if sigma == 0:
        return 0.0
    if d <= 0:
        return math.inf
    a = d * eta / sigma
    top = 2 * levels - 1
    tail = (4.0 / (a * math.sqrt(math.pi))) * math.exp(-(a * top) ** 2 / 2.0) \
        * (top + 4.0 / (a ** 2 * top))
    mean = K * (levels - 1) / 2.0
    spread = math.sqrt(K * (levels ** 2 - 1) / 12.0)
    prior = (2.0 * a * levels ** 2 / (math.pi * spread)) \
        * math.exp(-(levels - mean) ** 2 / (2.0 * spread ** 2) - a ** 2 / 2.0)
    return tail + prior


def mse_map_values(d1, d2, cfg: SystemConfig):
    _require_gaussian(cfg, "MAP MSE")
    sigma, eta = math.sqrt(cfg.sigma2), cfg.eta
    return (omega(d1, 2 * cfg.q, eta, sigma)
            + cfg.q ** 2 * np.asarray(omega(d2, 2 * cfg.n, eta, sigma)))


def mse_map(sp: GridSpacing, cfg: SystemConfig) -> MseBreakdown:
    _require_gaussian(cfg, "MAP MSE")
    sigma, eta = math.sqrt(cfg.sigma2), cfg.eta
    real_term = omega(sp.d1, 2 * cfg.q, eta, sigma)
    imag_term = cfg.q ** 2 * omega(sp.d2, 2 * cfg.n, eta, sigma)
    bound = map_tail_bound(sp.d1, cfg.q, cfg.K, sigma, eta) \
        + cfg.q ** 2 * map_tail_bound(sp.d2, cfg.n, cfg.K, sigma, eta)
    return MseBreakdown(real_term, imag_term, real_term + imag_term, bound)


def mse_ndim(sp: NDimSpacing, sigmas: Sequence[float], cfg: SystemConfig) -> float:
    """sum_i q^(i-1) * sum_m alpha_m Q((2m-1) d_i / sigma_i)."""
    sigmas = list(sigmas)
    if len(sigmas) != sp.N:
        raise DimensionMismatchError(f"{sp.N} spacings but {len(sigmas)} noise deviations")
    table = coefficient_table(cfg.K * (sp.q - 1) + 1)
    total = 0.0
    for i, (d, sigma) in enumerate(zip(sp.d, sigmas)):
        total += sp.q ** i * float(_q_sum(d, table.alpha, table.beta, sigma)[0])
    return total


def mu_cauchy(x, table: CoefficientTable, gamma: float):
    """2 * sum_m alpha_m P(z > (2m-1)x/2) for per-component Cauchy(gamma) noise."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tails = np.arctan2(2.0 * gamma, np.outer(x, table.beta)) / math.pi
    return _scalar(2.0 * (table.alpha * tails).sum(axis=1))


def mse_cauchy_values(d1, d2, cfg: SystemConfig):
    if cfg.is_gaussian:
        raise UnsupportedNoiseError("Cauchy MSE needs a Cauchy noise model")
    gamma = cfg.noise.gamma
    return (mu_cauchy(d1, coefficient_table(cfg.N1K), gamma)
            + cfg.q ** 2 * np.asarray(mu_cauchy(d2, coefficient_table(cfg.N2K), gamma)))


def mse_cauchy(sp: GridSpacing, cfg: SystemConfig) -> MseBreakdown:
    if cfg.is_gaussian:
        raise UnsupportedNoiseError("Cauchy MSE needs a Cauchy noise model")
    gamma = cfg.noise.gamma
    real_term = mu_cauchy(sp.d1, coefficient_table(cfg.N1K), gamma)
    imag_term = cfg.q ** 2 * mu_cauchy(sp.d2, coefficient_table(cfg.N2K), gamma)
    return MseBreakdown(real_term, imag_term, real_term + imag_term)
