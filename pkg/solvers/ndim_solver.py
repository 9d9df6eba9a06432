"""
Spacings of the N-dimensional base-q grid.

Adjacent dimensions satisfy the truncated stationarity link
g~_q(d_i/sigma_i, d_{i+1}/sigma_{i+1}) = 0 and the spacings meet the norm
constraint sum d_i^2 = 12P/(q^2-1). Writing l(x) = log(S~(x)/x), each link is
l(x_{i+1}) = l(x_i) - 2 log q with l strictly decreasing, so the chain is
propagated by 1-D bisection from x_1 and an outer root search on x_1 meets the norm.
"""
import logging
import math
from typing import List, Sequence, Tuple

from scipy.optimize import brentq

from core.encoder import NDimSpacing
from core.errors import (
    ChainPropagationError, DimensionMismatchError, InvalidConfigError, SolverError, SpacingOrderError,
)
from core.model import coefficient_table
from solvers.auxiliary import OneSidedSum
from solvers.base_solver import BaseSolver
from solvers.roots import bisect_increasing

logger = logging.getLogger(__name__)

NORM_XTOL = 1e-15
_MAX_EXPANSIONS = 200


class NDimSolver(BaseSolver):
    def __init__(self, N: int, q: int, K: int, power: float, sigmas: Sequence[float]):
        super().__init__("NDimSolver")
        self.N = N
        self.q = q
        self.K = K
        self.power = power
        self.sigmas: Tuple[float, ...] = tuple(float(s) for s in sigmas)
        self.log_sum = None

    def validate(self):
        if self.N < 2:
            raise InvalidConfigError(f"N must be >= 2, got {self.N}")
        if self.q < 2 or self.K < 1:
            raise InvalidConfigError(f"need q >= 2 and K >= 1, got q={self.q}, K={self.K}")
        if not self.power > 0:
            raise InvalidConfigError(f"power must be positive, got {self.power}")
        if len(self.sigmas) != self.N:
            raise DimensionMismatchError(f"{self.N} dimensions but {len(self.sigmas)} noise deviations")
        if any(not s > 0 for s in self.sigmas):
            raise InvalidConfigError(f"noise deviations must be positive, got {self.sigmas}")
        levels = self.K * (self.q - 1) + 1
        table = coefficient_table(levels).head((2 * levels) // 3)
        self.log_sum = OneSidedSum(table.gamma, table.theta, 1.0)

    def link_level(self, x: float) -> float:
        """l(x) = log(S~(x) / x), strictly decreasing in x."""
        return self.log_sum.log_value(x * x)[0]

    def _next(self, x: float, link: int) -> float:
        target = self.link_level(x) - 2.0 * math.log(self.q)
        gap = lambda y: target - self.link_level(y)
        hi = 2.0 * x
        for _ in range(_MAX_EXPANSIONS):
            if gap(hi) > 0:
                break
            hi *= 2.0
        else:
            raise ChainPropagationError(f"no bracket above x={x:.6g}", link=link)
        try:
            return bisect_increasing(gap, x, hi, f"chain link {link}")
        except SolverError as e:
            raise ChainPropagationError(str(e), link=link) from e

    def chain(self, x1: float) -> List[float]:
        """Normalised spacings x_1..x_N propagated from x_1."""
        xs = [x1]
        for link in range(1, self.N):
            xs.append(self._next(xs[-1], link))
        return xs

    def _norm_gap(self, x1: float) -> float:
        return sum((s * x) ** 2 for s, x in zip(self.sigmas, self.chain(x1))) - self.radius2

    @property
    def radius2(self) -> float:
        return 12.0 * self.power / (self.q ** 2 - 1)

    def solve(self) -> NDimSpacing:
        upper = math.sqrt(self.radius2) / self.sigmas[0]
        lower = 1e-3 * upper / float(self.q) ** (2 * (self.N - 1))
        if self._norm_gap(lower) >= 0:
            raise ChainPropagationError("norm constraint is exceeded even for vanishing d_1", link=0)
        x1 = brentq(self._norm_gap, lower, upper, xtol=NORM_XTOL * upper)
        d = tuple(s * x for s, x in zip(self.sigmas, self.chain(x1)))
        residual = abs(sum(v * v for v in d) - self.radius2) / self.radius2
        logger.info(f"{self.name} finished: d={tuple(round(v, 6) for v in d)} norm residual={residual:.2e}")
        return NDimSpacing(d=d, q=self.q)

    def check(self, result: NDimSpacing):
        d = result.d
        if any(b < a for a, b in zip(d, d[1:])):
            raise SpacingOrderError(f"{self.name}: spacings are not non-decreasing: {d}")


def solve_ndim(N: int, q: int, K: int, P: float, sigmas: Sequence[float]) -> NDimSpacing:
    return NDimSolver(N, q, K, P, sigmas).run()
