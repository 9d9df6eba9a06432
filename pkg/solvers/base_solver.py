"""
Base solver class for all constellation optimizers.
Provides the validate/solve/check lifecycle and the shared search over the power ellipse.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from core.encoder import GridSpacing
from core.errors import OacError, RootBracketError, SolverError
from core.model import DerivedGrid
from solvers.auxiliary import EllipseEquation, ellipse_point
from solvers.roots import T_XTOL, crossings

logger = logging.getLogger(__name__)

REGION_MAIN_FULL = "main-full-G"
REGION_MAIN_TRUNCATED = "main-truncated"
REGION_MAIN_MAP = "main-map"
REGION_CLOSED_FORM = "closed-form"
REGION_AXIS_Y = "axis-y"
REGION_AXIS_X = "axis-x"
AXIS_REGIONS = (REGION_AXIS_Y, REGION_AXIS_X)

# axis solutions keep the vanishing spacing at this fraction of its full-power value
AXIS_EPSILON = 1e-9
T_EDGE = 1e-14
POWER_TOLERANCE = 1e-12


def _scan_points() -> np.ndarray:
    edge = np.geomspace(T_EDGE, 1e-3, 48)
    body = np.linspace(-0.5 + 1e-3, 0.5 - 1e-3, 2001)
    return np.unique(np.concatenate([-0.5 + edge, body, 0.5 - edge[::-1]]))


T_SCAN = _scan_points()
T_LOW, T_HIGH = float(T_SCAN[0]), float(T_SCAN[-1])


@dataclass(frozen=True)
class OptimizerSolution:
    """Spacings returned by a solver together with the diagnostics of how they were found."""
    d1: float
    d2: float
    t_star: Optional[float]
    region: str
    kkt_residual: float
    power_residual: float
    method: str
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def spacing(self) -> GridSpacing:
        return GridSpacing(self.d1, self.d2)

    @property
    def is_axis(self) -> bool:
        return self.region in AXIS_REGIONS

    def as_record(self) -> Dict[str, Any]:
        record = asdict(self)
        record["warnings"] = list(self.warnings)
        return record


class BaseSolver(ABC):
    """
    Abstract base class for all optimizers.
    Subclasses check their preconditions in validate() and compute in solve().
    """

    def __init__(self, name: str):
        self.name = name
        self.grid: Optional[DerivedGrid] = None

    @abstractmethod
    def validate(self):
        """Check preconditions and derive cached quantities."""
        pass

    @abstractmethod
    def solve(self) -> Any:
        """Main computation of the solver."""
        pass

    def check(self, result: Any):
        """Post-conditions on the result; raise SolverError on violation."""
        if isinstance(result, OptimizerSolution) and not result.is_axis \
                and result.power_residual > POWER_TOLERANCE:
            raise SolverError(f"{self.name}: power residual {result.power_residual:.3g} exceeds tolerance")

    def run(self) -> Any:
        logger.info(f"{self.name} starting...")
        try:
            self.validate()
            result = self.solve()
            self.check(result)
        except OacError as e:
            logger.error(f"{self.name} failed: {e}")
            raise
        except Exception as e:
            logger.error(f"{self.name} unexpected error: {e}", exc_info=True)
            raise SolverError(f"{self.name}: {e}") from e
        if isinstance(result, OptimizerSolution):
            logger.info(f"{self.name} finished: region={result.region} d1={result.d1:.6g} "
                        f"d2={result.d2:.6g} kkt={result.kkt_residual:.2e}")
            for warning in result.warnings:
                logger.warning(f"{self.name}: {warning}")
        return result

    def power_residual(self, d1: float, d2: float) -> float:
        g = self.grid
        return abs((d1 / (g.scale * g.upsilon1)) ** 2 + (d2 / (g.scale * g.upsilon2)) ** 2 - 1.0)

    def interior_solution(self, t: float, equation: EllipseEquation, region: str,
                          warnings: Tuple[str, ...] = ()) -> OptimizerSolution:
        d1, d2 = ellipse_point(t, self.grid)
        return OptimizerSolution(d1=d1, d2=d2, t_star=t, region=region,
                                 kkt_residual=equation.relative_residual(t),
                                 power_residual=self.power_residual(d1, d2),
                                 method=self.name, warnings=warnings)

    def axis_solution(self, region: str, residual: Callable[[float, float], float],
                      warnings: Tuple[str, ...] = ()) -> OptimizerSolution:
        """Degenerate optimum on one axis of the ellipse; the other spacing is AXIS_EPSILON of full scale."""
        g = self.grid
        full1, full2 = g.scale * g.upsilon1, g.scale * g.upsilon2
        keep = math.sqrt(1.0 - AXIS_EPSILON ** 2)
        if region == REGION_AXIS_Y:
            d1, d2 = AXIS_EPSILON * full1, keep * full2
        else:
            d1, d2 = keep * full1, AXIS_EPSILON * full2
        return OptimizerSolution(d1=d1, d2=d2, t_star=None, region=region,
                                 kkt_residual=residual(d1 / g.scale, d2 / g.scale),
                                 power_residual=self.power_residual(d1, d2),
                                 method=self.name, warnings=warnings)

    def stationary_points(self, equation: EllipseEquation) -> List[float]:
        """Every t where the ellipse derivative changes sign from negative to positive."""
        points = []
        for lo, hi in crossings(equation.log_target, T_SCAN):
            if equation.log_target(hi) == 0:
                points.append(float(hi))
            else:
                points.append(float(bisect(equation.log_target, lo, hi, xtol=T_XTOL)))
        logger.debug(f"{self.name}: {equation.name} local minima at {points}")
        return points

    def descending_axes(self, equation: EllipseEquation) -> List[str]:
        """Axes toward which the objective keeps decreasing at the ends of the ellipse."""
        axes = []
        if equation.log_target(T_HIGH) < 0:
            axes.append(REGION_AXIS_Y)
        if equation.log_target(T_LOW) > 0:
            axes.append(REGION_AXIS_X)
        return axes

    def best_candidate(self, equation: EllipseEquation, objective: Callable, region: str,
                       residual: Callable[[float, float], float]) -> OptimizerSolution:
        """Lowest-objective point among interior minima and descending axes."""
        solutions = [self.interior_solution(t, equation, region) for t in self.stationary_points(equation)]
        solutions += [self.axis_solution(axis, residual) for axis in self.descending_axes(equation)]
        if not solutions:
            raise RootBracketError(f"{self.name}: {equation.name} has no admissible stationary point")
        scores = [float(objective(s.d1, s.d2)) for s in solutions]
        best = solutions[int(np.argmin(scores))]
        if best.is_axis and any(not s.is_axis for s in solutions):
            logger.warning(f"{self.name}: axis point beats every interior stationary point")
        return best


def cartesian_residual(first: Callable, second: Callable) -> Callable[[float, float], float]:
    """Relative residual |a - b| / (|a| + |b|) of a Cartesian stationarity equation a(x) = b(y)."""
    def residual(x: float, y: float) -> float:
        a, b = float(first(x)), float(second(y))
        if a == 0 and b == 0:
            return 0.0
        return abs(a - b) / (abs(a) + abs(b))
    return residual
