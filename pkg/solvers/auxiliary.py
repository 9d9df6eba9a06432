"""
Stationarity functions of the power-constrained MSE problem.

Cartesian form: g_q(x, y) with x = d1/sigma, y = d2/sigma.
Ellipse form: the calG family of t in (-0.5, 0.5), where the point
(Upsilon1*sqrt(0.5-t), Upsilon2*sqrt(0.5+t)) sweeps the power ellipse and
calG(t) = Upsilon1 * g_q(...). Each ellipse function is a difference of two
one-sided sums, so it is also available in a log domain that survives the
underflow of both sides at high SNR.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import logsumexp

from core.errors import DomainError
from core.model import CoefficientTable, DerivedGrid, odd_weights
from solvers.polynomials import cauchy_cross_values, p2_values

# relative log-magnitude beyond which a term cannot affect the leading one
_NEGLIGIBLE_LOG = 800.0


@dataclass(frozen=True)
class OneSidedSum:
    """factor * sum_m w_m * kernel(theta_m * rate * u) / sqrt(u)."""
    weights: np.ndarray
    theta: np.ndarray
    rate: float
    factor: float = 1.0
    rational: bool = False

    def _active(self, u: float) -> Tuple[np.ndarray, np.ndarray]:
        if self.rational or self.rate * u <= 0:
            return self.weights, self.theta
        limit = self.theta[0] + _NEGLIGIBLE_LOG / (self.rate * u)
        active = max(1, int(np.searchsorted(self.theta, limit, side="right")))
        return self.weights[:active], self.theta[:active]

    def value(self, u: float) -> float:
        weights, theta = self._active(u)
        z = theta * self.rate * u
        kernel = 1.0 / (1.0 + z) if self.rational else np.exp(-z)
        return self.factor * float((weights * kernel).sum()) / math.sqrt(u)

    def log_value(self, u: float) -> Tuple[float, float]:
        """(log|value|, sign)."""
        weights, theta = self._active(u)
        z = theta * self.rate * u
        if self.rational:
            total = float((weights / (1.0 + z)).sum())
            if total == 0:
                return -math.inf, 0.0
            magnitude, sign = math.log(abs(total)), math.copysign(1.0, total)
        else:
            magnitude, sign = logsumexp(-z, b=weights, return_sign=True)
            magnitude, sign = float(magnitude), float(sign)
            if not math.isfinite(magnitude) or sign == 0:
                return -math.inf, 0.0
        return magnitude + math.log(self.factor) - 0.5 * math.log(u), sign


@dataclass(frozen=True)
class EllipseEquation:
    """F(t) = left(0.5 - t) - right(0.5 + t)."""
    name: str
    left: OneSidedSum
    right: OneSidedSum

    def value(self, t: float) -> float:
        _check_t(t)
        return self.left.value(0.5 - t) - self.right.value(0.5 + t)

    def log_target(self, t: float) -> float:
        """Same sign as value(t); equals log(left) - log(right) when both sides are positive."""
        la, sa = self.left.log_value(0.5 - t)
        lb, sb = self.right.log_value(0.5 + t)
        if sa > 0 and sb > 0:
            return la - lb
        if sa < 0 and sb < 0:
            return lb - la
        if sa > 0 or sb < 0:
            return 1.0
        if sa < 0 or sb > 0:
            return -1.0
        return 0.0

    def relative_residual(self, t: float) -> float:
        """|left - right| / (|left| + |right|)."""
        la, sa = self.left.log_value(0.5 - t)
        lb, sb = self.right.log_value(0.5 + t)
        if sa > 0 and sb > 0:
            return abs(math.tanh((la - lb) / 2.0))
        a, b = self.left.value(0.5 - t), self.right.value(0.5 + t)
        if a == 0 and b == 0:
            return 0.0
        return abs(a - b) / (abs(a) + abs(b))


def _check_t(t: float):
    if not -0.5 < t < 0.5:
        raise DomainError(f"t must lie in (-0.5, 0.5), got {t}")


def _gaussian_equation(grid: DerivedGrid, first: CoefficientTable, second: CoefficientTable,
                       name: str) -> EllipseEquation:
    return EllipseEquation(
        name,
        OneSidedSum(first.gamma, first.theta, grid.upsilon1 ** 2),
        OneSidedSum(second.gamma, second.theta, grid.upsilon2 ** 2, grid.weight),
    )


def full_equation(grid: DerivedGrid) -> EllipseEquation:
    return _gaussian_equation(grid, grid.table1, grid.table2, "calG")


def truncated_equation(grid: DerivedGrid) -> EllipseEquation:
    return _gaussian_equation(grid, grid.table1.head(grid.barN1), grid.table2.head(grid.barN2), "calGbar")


def leading_equation(grid: DerivedGrid) -> EllipseEquation:
    return _gaussian_equation(grid, grid.table1.head(1), grid.table2.head(1), "calF")


def map_equation(grid: DerivedGrid) -> EllipseEquation:
    if grid.eta is None:
        raise DomainError("calH needs the Gaussian region scale eta")
    first, second = odd_weights(2 * grid.q), odd_weights(2 * grid.n)
    eta2 = grid.eta ** 2
    return EllipseEquation(
        "calH",
        OneSidedSum(first.theta, first.theta, eta2 * grid.upsilon1 ** 2),
        OneSidedSum(second.theta, second.theta, eta2 * grid.upsilon2 ** 2, grid.weight),
    )


def cauchy_equation(grid: DerivedGrid) -> EllipseEquation:
    first, second = grid.table1, grid.table2
    return EllipseEquation(
        "calG_cauchy",
        OneSidedSum(first.gamma, first.theta, grid.upsilon1 ** 2, rational=True),
        OneSidedSum(second.gamma, second.theta, grid.upsilon2 ** 2, grid.weight, rational=True),
    )


def calG(t: float, grid: DerivedGrid) -> float:
    return full_equation(grid).value(t)


def calGbar(t: float, grid: DerivedGrid) -> float:
    return truncated_equation(grid).value(t)


def calH(t: float, grid: DerivedGrid) -> float:
    return map_equation(grid).value(t)


def calF(t: float, grid: DerivedGrid) -> float:
    return leading_equation(grid).value(t)


def calG_cauchy(t: float, grid: DerivedGrid) -> float:
    return cauchy_equation(grid).value(t)


def g_q(x, y, grid: DerivedGrid):
    """sum gamma_1 e^{-theta x^2}/x - q^2 kappa^2 sum gamma_2 e^{-theta y^2}/y."""
    return p2_values(grid.table1, x) - grid.q ** 2 * grid.kappa ** 2 * p2_values(grid.table2, y)


def g_tilde(x, y, grid: DerivedGrid):
    """g_q restricted to the positive coefficients m <= barN."""
    return (p2_values(grid.table1.head(grid.barN1), x)
            - grid.q ** 2 * grid.kappa ** 2 * p2_values(grid.table2.head(grid.barN2), y))


def g_cauchy(x, y, grid: DerivedGrid):
    return (cauchy_cross_values(grid.table1, x)
            - grid.q ** 2 * grid.kappa ** 2 * cauchy_cross_values(grid.table2, y))


def ellipse_point(t: float, grid: DerivedGrid) -> Tuple[float, float]:
    """Spacings (d1, d2) on the full-power ellipse at parameter t."""
    _check_t(t)
    return (grid.scale * grid.upsilon1 * math.sqrt(0.5 - t),
            grid.scale * grid.upsilon2 * math.sqrt(0.5 + t))


def tail_gap_bound(t: float, grid: DerivedGrid) -> float:
    """Tail bound on |calF(t) - calG(t)|."""
    _check_t(t)
    xi, q2, n2 = grid.snr, grid.q ** 2 - 1, grid.n ** 2 - 1
    first = math.exp(-16.0 * xi * (0.5 - t) / (3.0 * q2)) / math.sqrt(q2 * (0.5 - t))
    second = grid.weight * math.exp(-16.0 * xi * (0.5 + t) / (3.0 * n2)) / math.sqrt(n2 * (0.5 + t))
    return 36.0 * math.sqrt(3.0 * xi) * (first + second)


def tail_gap_bound_simplified(t: float, grid: DerivedGrid) -> float:
    """Simplified bound, valid when lambert_condition holds."""
    _check_t(t)
    return 18.0 * math.exp(-4.0 / 9.0) * (1.0 / (0.5 - t) + grid.weight / (0.5 + t))


def lambert_condition(t: float, grid: DerivedGrid) -> bool:
    """High-SNR condition xi >= max{q^2/(0.5-t), n^2/(0.5+t)}/10."""
    return grid.snr >= 0.1 * max(grid.q ** 2 / (0.5 - t), grid.n ** 2 / (0.5 + t))
