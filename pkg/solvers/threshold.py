"""
SNR threshold xi1 above which the interior stationary point is the optimum.

The threshold comes from the largest root of P1 on one axis (P3 under Cauchy noise)
paired with the cross equation g = 0 solved for the other axis.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

from core.errors import ThresholdNotApplicableError
from core.model import DerivedGrid, coefficient_table
from solvers.polynomials import cauchy_cross_values, p2_values
from solvers.roots import find_positive_roots, p1_roots, p3_roots

logger = logging.getLogger(__name__)

IN_PHASE = "in-phase"
QUADRATURE = "quadrature"


@dataclass(frozen=True)
class ThresholdPoint:
    x: float
    y: float
    branch: str
    xi1: float


def _largest_crossing(f, label: str) -> float:
    upper = 1.0
    while f(upper) >= 0:
        upper *= 2.0
        if upper > 1e4:
            raise ThresholdNotApplicableError(f"cross equation for {label} has no decaying end")
    report = find_positive_roots(f, upper, points=4096)
    if not report.roots:
        raise ThresholdNotApplicableError(f"cross equation for {label} has no positive root")
    return report.largest


@lru_cache(maxsize=256)
def _threshold(q: int, n: int, K: int, cauchy: bool) -> ThresholdPoint:
    N1, N2 = K * (q - 1) + 1, K * (n - 1) + 1
    table1, table2 = coefficient_table(N1), coefficient_table(N2)
    weight = q ** 2 * (q ** 2 - 1) / (n ** 2 - 1)
    cross = cauchy_cross_values if cauchy else p2_values
    roots_of = p3_roots if cauchy else p1_roots

    first = roots_of(N1)
    if (cauchy and first.root_count >= 1) or (not cauchy and N1 >= 9):
        x = first.largest
        level = cross(table1, x)
        if level <= 0:
            raise ThresholdNotApplicableError(f"in-phase turning point has non-positive level {level:.3g}")
        y = _largest_crossing(lambda v: weight * cross(table2, v) - level, "quadrature axis")
        branch = IN_PHASE
    else:
        second = roots_of(N2)
        if (cauchy and second.root_count == 1) or (not cauchy and N2 >= 10):
            y = second.largest
            level = weight * cross(table2, y)
            x = _largest_crossing(lambda v: cross(table1, v) - level, "in-phase axis")
            branch = QUADRATURE
        else:
            raise ThresholdNotApplicableError(f"no threshold for N1K={N1}, N2K={N2}")

    xi1 = (q ** 2 - 1) * x ** 2 / 12.0 + (n ** 2 - 1) * y ** 2 / 12.0
    logger.debug(f"Threshold q={q} n={n} K={K} cauchy={cauchy}: x={x:.6g} y={y:.6g} xi1={xi1:.6g}")
    return ThresholdPoint(x=x, y=y, branch=branch, xi1=xi1)


def threshold_applies(grid: DerivedGrid) -> bool:
    return grid.N1K >= 9 or grid.N2K >= 10


def threshold_point(grid: DerivedGrid, cauchy: bool = False) -> ThresholdPoint:
    return _threshold(grid.q, grid.n, grid.K, cauchy)


def threshold_xi1(grid: DerivedGrid) -> float:
    if not threshold_applies(grid):
        raise ThresholdNotApplicableError(f"no threshold for N1K={grid.N1K}, N2K={grid.N2K}")
    return threshold_point(grid).xi1


def cauchy_threshold_xi1(grid: DerivedGrid) -> float:
    return threshold_point(grid, cauchy=True).xi1


def threshold_lower_bound(grid: DerivedGrid) -> float:
    return (1.3 ** 2 * (grid.q ** 2 - 1) / (12.0 * grid.N1K ** 2)
            + 4.2 ** 2 * (grid.n ** 2 - 1) / (12.0 * grid.n * grid.K ** 2))


def threshold_approx(grid: DerivedGrid) -> float:
    """Large-grid approximation 1.5 n / K^2."""
    return 1.5 * grid.n / grid.K ** 2
