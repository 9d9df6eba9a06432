"""
Root location helpers: log-grid sign scans for positive roots and certified
bisection on strictly increasing targets.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from core.errors import MonotonicityError, RootBracketError
from core.model import coefficient_table
from solvers.polynomials import p1_root_bound, p1_values, p2_values, p3_values

logger = logging.getLogger(__name__)

SCAN_POINTS = 2048
ROOT_XTOL = 1e-12
T_XTOL = 1e-15
MONOTONE_SAMPLES = 256


@dataclass(frozen=True)
class RootReport:
    N: int
    roots: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def root_count(self) -> int:
        return len(self.roots)

    @property
    def largest(self) -> float:
        if not self.roots:
            raise RootBracketError(f"no positive root for N={self.N}")
        return self.roots[-1]


def _sign_changes(values: np.ndarray) -> List[int]:
    signs = np.sign(values)
    return [i for i in range(len(signs) - 1) if signs[i] != 0 and signs[i] * signs[i + 1] <= 0]


def find_positive_roots(f: Callable, x_max: float, x_min: float = 1e-6,
                        points: int = SCAN_POINTS, N: int = 0) -> RootReport:
    """
    Locate every sign change of a vectorised f on a log grid over [x_min, x_max]
    and refine each by bisection to ROOT_XTOL.
    """
    grid = np.geomspace(x_min, x_max, points)
    values = np.asarray(f(grid), dtype=float)
    roots = []
    for i in _sign_changes(values):
        if values[i + 1] == 0:
            roots.append(float(grid[i + 1]))
            continue
        roots.append(float(bisect(lambda x: float(f(x)), grid[i], grid[i + 1], xtol=ROOT_XTOL)))
    report = RootReport(N=N, roots=tuple(sorted(roots)))
    logger.debug(f"Root scan N={N} over [{x_min:.3g}, {x_max:.3g}]: {report.roots}")
    return report


def p1_roots(N: int) -> RootReport:
    table = coefficient_table(N)
    return find_positive_roots(lambda x: p1_values(table, x), 4.0 * p1_root_bound(N), N=N)


def p2_roots(N: int) -> RootReport:
    """P2 falls to 0+ beyond the largest P1 root, so every P2 root lies below it."""
    table = coefficient_table(N)
    return find_positive_roots(lambda x: p2_values(table, x), 4.0 * p1_root_bound(N), N=N)


def p3_roots(N: int) -> RootReport:
    table = coefficient_table(N)
    return find_positive_roots(lambda x: p3_values(table, x), 50.0, points=4096, N=N)


def sample_grid(lo: float, hi: float, samples: int = MONOTONE_SAMPLES) -> np.ndarray:
    return np.linspace(lo, hi, samples + 2)[1:-1]


def verify_monotone(target: Callable[[float], float], lo: float, hi: float,
                    name: str, samples: int = MONOTONE_SAMPLES):
    """Raise MonotonicityError unless target strictly increases across the samples."""
    ts = sample_grid(lo, hi, samples)
    values = np.array([target(t) for t in ts])
    finite = np.isfinite(values)
    if not np.all(np.diff(values[finite]) > 0):
        worst = int(np.argmin(np.diff(values[finite])))
        raise MonotonicityError(f"{name} is not strictly increasing near t={ts[finite][worst]:.6g}")


def bisect_increasing(target: Callable[[float], float], lo: float, hi: float, name: str,
                      check: bool = True) -> float:
    """Root of a strictly increasing target on [lo, hi], certified by probing first."""
    if check:
        verify_monotone(target, lo, hi, name)
    f_lo, f_hi = target(lo), target(hi)
    if not (f_lo < 0 < f_hi):
        raise RootBracketError(f"{name} does not change sign on [{lo:.6g}, {hi:.6g}] "
                               f"(values {f_lo:.3g}, {f_hi:.3g})")
    return float(bisect(target, lo, hi, xtol=T_XTOL))


def crossings(target: Callable[[float], float], ts: Sequence[float]) -> List[Tuple[float, float]]:
    """Brackets where target moves from negative to positive along ts."""
    values = [target(t) for t in ts]
    return [(ts[i], ts[i + 1]) for i in range(len(ts) - 1) if values[i] < 0 <= values[i + 1]]
