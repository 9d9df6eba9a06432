"""
Optimal grid spacings for ML (nearest-point) decoding under Gaussian noise.

Below the SNR threshold the optimum collapses onto one axis of the power
ellipse. Above it (or when no threshold exists) the optimum is the interior
stationary point of calG with the lowest closed-form MSE.
"""
import logging
from typing import Optional

from core.analytic_mse import mse_ml_values
from core.errors import RootBracketError, SolverError, ThresholdNotApplicableError, UnsupportedNoiseError
from core.model import SystemConfig, derive_grid
from solvers.auxiliary import full_equation, truncated_equation
from solvers.base_solver import (
    REGION_AXIS_X, REGION_AXIS_Y, REGION_MAIN_FULL, REGION_MAIN_TRUNCATED, T_HIGH, T_LOW,
    BaseSolver, OptimizerSolution, cartesian_residual,
)
from solvers.polynomials import p2_values
from solvers.roots import bisect_increasing
from solvers.threshold import IN_PHASE, ThresholdPoint, threshold_applies, threshold_point

logger = logging.getLogger(__name__)


class MLSolver(BaseSolver):
    def __init__(self, cfg: SystemConfig):
        super().__init__("MLSolver")
        self.cfg = cfg
        self.threshold: Optional[ThresholdPoint] = None

    def validate(self):
        if not self.cfg.is_gaussian:
            raise UnsupportedNoiseError("ML spacing optimization needs Gaussian noise")
        self.grid = derive_grid(self.cfg)
        if threshold_applies(self.grid):
            try:
                self.threshold = threshold_point(self.grid)
            except ThresholdNotApplicableError as e:
                logger.warning(f"{self.name}: threshold unavailable ({e}); scanning the full ellipse")

    def _residual(self):
        grid = self.grid
        return cartesian_residual(lambda x: p2_values(grid.table1, x),
                                  lambda y: grid.q ** 2 * grid.kappa ** 2 * p2_values(grid.table2, y))

    def _objective(self, d1, d2):
        return mse_ml_values(d1, d2, self.cfg)

    def solve(self) -> OptimizerSolution:
        grid = self.grid
        if self.threshold is None:
            return self.best_candidate(full_equation(grid), self._objective, REGION_MAIN_FULL, self._residual())

        if grid.snr < self.threshold.xi1:
            axis = REGION_AXIS_Y if self.threshold.branch == IN_PHASE else REGION_AXIS_X
            logger.info(f"{self.name}: snr {grid.snr:.4g} below threshold {self.threshold.xi1:.4g}")
            return self.axis_solution(axis, self._residual())

        truncated = truncated_equation(grid)
        try:
            anchor: Optional[float] = bisect_increasing(truncated.log_target, T_LOW, T_HIGH, truncated.name)
            logger.debug(f"{self.name}: calGbar root at t={anchor:.15g}")
        except SolverError as e:
            logger.debug(f"{self.name}: calGbar root unavailable ({e})")
            anchor = None
        try:
            return self.best_candidate(full_equation(grid), self._objective, REGION_MAIN_TRUNCATED,
                                       self._residual())
        except RootBracketError:
            if anchor is None:
                raise
            return self.interior_solution(anchor, truncated, REGION_MAIN_TRUNCATED,
                                          warnings=("calG has no crossing; using the calGbar root",))


def solve_ml(cfg: SystemConfig) -> OptimizerSolution:
    return MLSolver(cfg).run()
