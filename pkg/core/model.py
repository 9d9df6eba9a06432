"""
Problem configuration, derived grid quantities and coefficient tables.
Everything here is immutable and shared by the other modules.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import ClassVar, Optional, Union

import numpy as np

from core.errors import DomainError, InvalidConfigError, UnsupportedNoiseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussianNoise:
    """Circularly symmetric complex Gaussian noise with total variance sigma2."""
    sigma2: float
    kind: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not math.isfinite(self.sigma2) or self.sigma2 < 0:
            raise InvalidConfigError(f"sigma2 must be finite and >= 0, got {self.sigma2}")

    @property
    def scale(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def noise_power(self) -> float:
        return self.sigma2


@dataclass(frozen=True)
class CauchyNoise:
    """Per-component centred Cauchy noise with scale gamma."""
    gamma: float
    kind: ClassVar[str] = "cauchy"

    def __post_init__(self):
        if not math.isfinite(self.gamma) or self.gamma <= 0:
            raise InvalidConfigError(f"gamma must be finite and > 0, got {self.gamma}")

    @property
    def scale(self) -> float:
        return self.gamma

    @property
    def noise_power(self) -> float:
        return self.gamma ** 2


NoiseModel = Union[GaussianNoise, CauchyNoise]


def snr_from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


def snr_to_db(xi: float) -> float:
    if not xi > 0:
        raise DomainError(f"SNR must be positive to convert to dB, got {xi}")
    return 10.0 * math.log10(xi)


@dataclass(frozen=True)
class SystemConfig:
    """
    One problem instance: q in-phase levels, n quadrature levels, K nodes,
    per-symbol power budget and the noise model.

    The noise model is authoritative; the SNR is derived as P/sigma2 for Gaussian
    noise and P/gamma^2 for Cauchy noise. Use from_snr to go the other way.
    """
    q: int
    n: int
    K: int
    power: float = 1.0
    noise: NoiseModel = field(default_factory=lambda: GaussianNoise(1.0))

    def __post_init__(self):
        if self.q < 2 or self.n < 2:
            raise InvalidConfigError(f"q and n must be >= 2, got q={self.q}, n={self.n}")
        if self.K < 1:
            raise InvalidConfigError(f"K must be >= 1, got {self.K}")
        if not math.isfinite(self.power) or self.power <= 0:
            raise InvalidConfigError(f"power must be positive, got {self.power}")

    @classmethod
    def from_snr(cls, q: int, n: int, K: int, snr: float, power: float = 1.0,
                 noise_kind: str = "gaussian") -> "SystemConfig":
        if not math.isfinite(snr) or snr <= 0:
            raise InvalidConfigError(f"snr must be positive and finite, got {snr}")
        if noise_kind == "gaussian":
            noise: NoiseModel = GaussianNoise(power / snr)
        elif noise_kind == "cauchy":
            noise = CauchyNoise(math.sqrt(power / snr))
        else:
            raise InvalidConfigError(f"unknown noise model {noise_kind!r}")
        return cls(q=q, n=n, K=K, power=power, noise=noise)

    @classmethod
    def from_snr_db(cls, q: int, n: int, K: int, snr_db: float, power: float = 1.0,
                    noise_kind: str = "gaussian") -> "SystemConfig":
        return cls.from_snr(q, n, K, snr_from_db(snr_db), power, noise_kind)

    @property
    def snr(self) -> float:
        if self.noise.noise_power == 0:
            return math.inf
        return self.power / self.noise.noise_power

    @property
    def is_gaussian(self) -> bool:
        return isinstance(self.noise, GaussianNoise)

    @property
    def sigma2(self) -> float:
        if not self.is_gaussian:
            raise UnsupportedNoiseError("sigma2 is only defined for Gaussian noise")
        return self.noise.sigma2

    @property
    def eta(self) -> float:
        """MAP region scale 1 + sigma2/K."""
        return 1.0 + self.sigma2 / self.K

    @property
    def N1K(self) -> int:
        return self.K * (self.q - 1) + 1

    @property
    def N2K(self) -> int:
        return self.K * (self.n - 1) + 1

    @property
    def symbol_count(self) -> int:
        return self.q * self.n


@dataclass(frozen=True)
class CoefficientTable:
    """Per-index coefficients for m = 1..N-1 of one superimposed axis."""
    N: int
    m: np.ndarray
    theta: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray

    def head(self, count: int) -> "CoefficientTable":
        """Table restricted to m <= count."""
        count = max(0, min(count, len(self.m)))
        return CoefficientTable(self.N, self.m[:count], self.theta[:count],
                                self.alpha[:count], self.gamma[:count], self.beta[:count])


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@lru_cache(maxsize=512)
def coefficient_table(N: int) -> CoefficientTable:
    if N < 2:
        raise InvalidConfigError(f"grid size must be >= 2, got {N}")
    m = np.arange(1, N, dtype=float)
    beta = 2.0 * m - 1.0
    alpha = beta + (3.0 * m * (1.0 - m) - 1.0) / N
    return CoefficientTable(
        N=N,
        m=_frozen(m),
        theta=_frozen(beta ** 2 / 4.0),
        alpha=_frozen(alpha),
        gamma=_frozen(beta * alpha),
        beta=_frozen(beta),
    )


@lru_cache(maxsize=128)
def odd_weights(count: int) -> CoefficientTable:
    """beta_m = 2m-1 and theta_m for m = 1..count (MAP sums, no grid size attached)."""
    m = np.arange(1, count + 1, dtype=float)
    beta = 2.0 * m - 1.0
    return CoefficientTable(N=count + 1, m=_frozen(m), theta=_frozen(beta ** 2 / 4.0),
                            alpha=_frozen(beta.copy()), gamma=_frozen(beta ** 2),
                            beta=_frozen(beta))


def sign_change_index(N: int) -> int:
    """First m with gamma_m <= 0, or N when every coefficient is positive."""
    non_positive = np.nonzero(coefficient_table(N).gamma <= 0)[0]
    return int(non_positive[0]) + 1 if len(non_positive) else N


@dataclass(frozen=True)
class DerivedGrid:
    """Quantities derived from a SystemConfig that the solvers need repeatedly."""
    q: int
    n: int
    K: int
    snr: float
    scale: float
    eta: Optional[float]
    N1K: int
    N2K: int
    upsilon1: float
    upsilon2: float
    kappa: float
    barN1: int
    barN2: int

    @property
    def table1(self) -> CoefficientTable:
        return coefficient_table(self.N1K)

    @property
    def table2(self) -> CoefficientTable:
        return coefficient_table(self.N2K)

    @property
    def weight(self) -> float:
        """kappa * q^2, the weight of the quadrature side in the t-parametrised equations."""
        return self.kappa * self.q ** 2


def derive_grid(cfg: SystemConfig) -> DerivedGrid:
    if cfg.K < 2:
        raise InvalidConfigError(f"K must be >= 2 for grid derivation, got {cfg.K}")
    xi = cfg.snr
    if not math.isfinite(xi) or xi <= 0:
        raise InvalidConfigError(f"derivation needs a positive finite SNR, got {xi}")
    q2, n2 = cfg.q ** 2 - 1, cfg.n ** 2 - 1
    N1K, N2K = cfg.N1K, cfg.N2K
    grid = DerivedGrid(
        q=cfg.q,
        n=cfg.n,
        K=cfg.K,
        snr=xi,
        scale=cfg.noise.scale,
        eta=cfg.eta if cfg.is_gaussian else None,
        N1K=N1K,
        N2K=N2K,
        upsilon1=math.sqrt(12.0 * xi / q2),
        upsilon2=math.sqrt(12.0 * xi / n2),
        kappa=math.sqrt(q2 / n2),
        barN1=(2 * N1K) // 3,
        barN2=(2 * N2K) // 3,
    )
    logger.debug(f"Derived grid N1K={N1K} N2K={N2K} U1={grid.upsilon1:.6g} U2={grid.upsilon2:.6g}")
    return grid
