"""Spacing optimizers: threshold polynomials, ellipse equations and the per-decoder solvers."""
from solvers.base_solver import BaseSolver, OptimizerSolution
from solvers.cauchy_solver import solve_cauchy
from solvers.lambert_solver import solve_lambert
from solvers.map_solver import solve_map
from solvers.ml_solver import solve_ml
from solvers.ndim_solver import solve_ndim

__all__ = ['BaseSolver', 'OptimizerSolution', 'solve_ml', 'solve_map', 'solve_lambert',
           'solve_cauchy', 'solve_ndim']
