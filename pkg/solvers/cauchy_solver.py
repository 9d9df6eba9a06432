"""
Optimal grid spacings under i.i.d. Cauchy noise.

The ellipse equation uses the rational kernel 1/(1 + theta U^2 u) in place of the
Gaussian exponential. Candidates are ranked by the closed-form Cauchy MSE.
"""
import logging
from typing import Optional

from core.analytic_mse import mse_cauchy_values
from core.errors import ThresholdNotApplicableError, UnsupportedNoiseError
from core.model import SystemConfig, derive_grid
from solvers.auxiliary import cauchy_equation
from solvers.base_solver import (
    REGION_AXIS_X, REGION_AXIS_Y, REGION_MAIN_FULL, BaseSolver, OptimizerSolution, cartesian_residual,
)
from solvers.polynomials import cauchy_cross_values
from solvers.threshold import IN_PHASE, ThresholdPoint, threshold_point

logger = logging.getLogger(__name__)


class CauchySolver(BaseSolver):
    def __init__(self, cfg: SystemConfig):
        super().__init__("CauchySolver")
        self.cfg = cfg
        self.threshold: Optional[ThresholdPoint] = None

    def validate(self):
        if self.cfg.is_gaussian:
            raise UnsupportedNoiseError("Cauchy spacing optimization needs a Cauchy noise model")
        self.grid = derive_grid(self.cfg)
        try:
            self.threshold = threshold_point(self.grid, cauchy=True)
        except ThresholdNotApplicableError as e:
            logger.debug(f"{self.name}: no Cauchy threshold ({e})")

    def _residual(self):
        grid = self.grid
        return cartesian_residual(
            lambda x: cauchy_cross_values(grid.table1, x),
            lambda y: grid.q ** 2 * grid.kappa ** 2 * cauchy_cross_values(grid.table2, y))

    def _objective(self, d1, d2):
        return mse_cauchy_values(d1, d2, self.cfg)

    def solve(self) -> OptimizerSolution:
        grid = self.grid
        if self.threshold is not None and grid.snr < self.threshold.xi1:
            axis = REGION_AXIS_Y if self.threshold.branch == IN_PHASE else REGION_AXIS_X
            logger.info(f"{self.name}: snr {grid.snr:.4g} below Cauchy threshold {self.threshold.xi1:.4g}")
            return self.axis_solution(axis, self._residual())
        return self.best_candidate(cauchy_equation(grid), self._objective, REGION_MAIN_FULL, self._residual())


def solve_cauchy(cfg: SystemConfig) -> OptimizerSolution:
    return CauchySolver(cfg).run()
