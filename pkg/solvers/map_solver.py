"""Optimal spacings for the Gaussian-prior MAP decoder: the unique root of calH."""
import logging

from core.errors import UnsupportedNoiseError
from core.model import SystemConfig, derive_grid
from solvers.auxiliary import map_equation
from solvers.base_solver import REGION_MAIN_MAP, T_HIGH, T_LOW, BaseSolver, OptimizerSolution
from solvers.roots import bisect_increasing

logger = logging.getLogger(__name__)


class MAPSolver(BaseSolver):
    def __init__(self, cfg: SystemConfig):
        super().__init__("MAPSolver")
        self.cfg = cfg

    def validate(self):
        if not self.cfg.is_gaussian:
            raise UnsupportedNoiseError("MAP spacing optimization needs Gaussian noise")
        self.grid = derive_grid(self.cfg)

    def solve(self) -> OptimizerSolution:
        equation = map_equation(self.grid)
        t_star = bisect_increasing(equation.log_target, T_LOW, T_HIGH, equation.name)
        return self.interior_solution(t_star, equation, REGION_MAIN_MAP)


def solve_map(cfg: SystemConfig) -> OptimizerSolution:
    return MAPSolver(cfg).run()
