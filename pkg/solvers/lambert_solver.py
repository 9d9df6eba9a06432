"""
High-SNR closed-form spacings from the leading-term equation calF(t) = 0.

Taking logs of the two leading exponentials turns calF = 0 into
    log(0.5+t) - log(0.5-t) + (U1^2 + U2^2) t / 2 = 2 log(kappa~),
whose left side is strictly increasing on (-0.5, 0.5). This is the Lambert-W
solution written in a form that stays finite for every SNR.
"""
import logging
import math

from core.errors import UnsupportedNoiseError
from core.model import DerivedGrid, SystemConfig, derive_grid
from solvers.auxiliary import lambert_condition, leading_equation
from solvers.base_solver import REGION_CLOSED_FORM, T_HIGH, T_LOW, BaseSolver, OptimizerSolution
from solvers.roots import bisect_increasing

logger = logging.getLogger(__name__)


def log_kappa_tilde(grid: DerivedGrid) -> float:
    """log of e^{(U1^2 - U2^2)/8} * kappa * q^2 * gamma_1(N2) / gamma_1(N1)."""
    return (math.log(grid.weight)
            + math.log(grid.table2.gamma[0]) - math.log(grid.table1.gamma[0])
            + (grid.upsilon1 ** 2 - grid.upsilon2 ** 2) / 8.0)


def lambert_target(t: float, grid: DerivedGrid) -> float:
    return (math.log(0.5 + t) - math.log(0.5 - t)
            + (grid.upsilon1 ** 2 + grid.upsilon2 ** 2) * t / 2.0
            - 2.0 * log_kappa_tilde(grid))


class LambertSolver(BaseSolver):
    def __init__(self, cfg: SystemConfig):
        super().__init__("LambertSolver")
        self.cfg = cfg

    def validate(self):
        if not self.cfg.is_gaussian:
            raise UnsupportedNoiseError("the closed-form design assumes Gaussian noise")
        self.grid = derive_grid(self.cfg)

    def solve(self) -> OptimizerSolution:
        grid = self.grid
        t_star = bisect_increasing(lambda t: lambert_target(t, grid), T_LOW, T_HIGH, "lambert")
        warnings = ()
        if not lambert_condition(t_star, grid):
            warnings = (f"high-SNR condition fails at t={t_star:.6g}; closed form is approximate",)
        return self.interior_solution(t_star, leading_equation(grid), REGION_CLOSED_FORM, warnings)


def solve_lambert(cfg: SystemConfig) -> OptimizerSolution:
    return LambertSolver(cfg).run()
