"""Tests for the ML, MAP, closed-form and Cauchy spacing optimizers."""

import math

import numpy as np
import pytest

from core.analytic_mse import mse_cauchy, mse_map, mse_map_values, mse_ml, mse_ml_values
from core.encoder import equal_distance_spacing
from core.errors import InvalidConfigError, SolverError, UnsupportedNoiseError
from core.model import DerivedGrid, SystemConfig, derive_grid, odd_weights
from experiments.monte_carlo import DECODER_MAP, DECODER_ML, estimate_mse
from solvers import BaseSolver, OptimizerSolution, solve_cauchy, solve_lambert, solve_map, solve_ml
from solvers.auxiliary import EllipseEquation, OneSidedSum, ellipse_point, map_equation
from solvers.base_solver import (
    REGION_AXIS_Y, REGION_CLOSED_FORM, REGION_MAIN_FULL, REGION_MAIN_MAP, REGION_MAIN_TRUNCATED,
)
from solvers.threshold import threshold_applies, threshold_xi1

KKT_TOLERANCE = 1e-8
POWER_TOLERANCE = 1e-12
GRID_POINTS = 100_001
MC_TRIALS = 50_000
MC_SEED = 20240607
CURVATURE_STEP = 1e-3
RANDOM_CONFIGS = 20
RATIO_SNRS_DB = (15.0, 18.0, 21.0, 24.0, 27.0, 30.0)


def _gaussian(K: int, snr_db: float, q: int = 4, n: int = 4) -> SystemConfig:
    return SystemConfig.from_snr_db(q, n, K, snr_db)


def _second_difference(objective, t: float, grid) -> float:
    values = [objective(*ellipse_point(t + k * CURVATURE_STEP, grid)) for k in (-1, 0, 1)]
    return values[0] - 2 * values[1] + values[2]


def _plain_equation(grid: DerivedGrid) -> EllipseEquation:
    first, second = odd_weights(2 * grid.q), odd_weights(2 * grid.n)
    return EllipseEquation(
        "plain",
        OneSidedSum(first.theta, first.theta, grid.upsilon1 ** 2),
        OneSidedSum(second.theta, second.theta, grid.upsilon2 ** 2, grid.weight),
    )


class _Failing(BaseSolver):
    def __init__(self, error: Exception):
        super().__init__("Failing")
        self.error = error

    def validate(self):
        pass

    def solve(self):
        raise self.error


class _Unbalanced(BaseSolver):
    def __init__(self):
        super().__init__("Unbalanced")

    def validate(self):
        pass

    def solve(self):
        return OptimizerSolution(d1=1.0, d2=1.0, t_star=0.0, region=REGION_MAIN_FULL,
                                 kkt_residual=0.0, power_residual=1e-6, method=self.name)


class TestBaseSolver:
    """Validate the error wrapping around every solver."""

    def test_library_errors_pass_through(self) -> None:
        with pytest.raises(InvalidConfigError):
            _Failing(InvalidConfigError("bad")).run()

    def test_unexpected_errors_are_wrapped(self) -> None:
        with pytest.raises(SolverError) as info:
            _Failing(ValueError("boom")).run()
        assert isinstance(info.value.__cause__, ValueError)

    def test_power_residual_is_checked(self) -> None:
        with pytest.raises(SolverError):
            _Unbalanced().run()

    def test_record(self) -> None:
        solution = OptimizerSolution(d1=0.5, d2=0.7, t_star=None, region=REGION_AXIS_Y, kkt_residual=0.1,
                                     power_residual=0.0, method="x", warnings=("w",))
        assert solution.is_axis
        assert solution.as_record()["warnings"] == ["w"]
        assert solution.spacing.d2 == 0.7


class TestMLSolver:
    """Validate the ML optimizer above and below the SNR threshold."""

    def test_interior_above_threshold(self) -> None:
        cfg = _gaussian(10, 15.0)
        solution = solve_ml(cfg)
        assert solution.region == REGION_MAIN_TRUNCATED
        assert solution.kkt_residual <= KKT_TOLERANCE
        assert solution.power_residual <= POWER_TOLERANCE
        assert solution.t_star > 0

    def test_beats_equal_distance(self) -> None:
        cfg = _gaussian(10, 15.0)
        best = mse_ml(solve_ml(cfg).spacing, cfg).total
        assert best <= mse_ml(equal_distance_spacing(cfg), cfg).total * (1 + 1e-12)

    def test_local_minimum_on_ellipse(self) -> None:
        cfg = _gaussian(10, 15.0)
        grid = derive_grid(cfg)
        solution = solve_ml(cfg)
        best = mse_ml(solution.spacing, cfg).total
        for dt in (-0.01, 0.01):
            d1, d2 = ellipse_point(solution.t_star + dt, grid)
            assert mse_ml_values(d1, d2, cfg) >= best

    @pytest.mark.parametrize("K, snr_db", [(10, 15.0), (20, 20.0), (2, 10.0)])
    def test_positive_curvature_at_solution(self, K: int, snr_db: float) -> None:
        cfg = _gaussian(K, snr_db)
        solution = solve_ml(cfg)
        if solution.t_star is not None:
            objective = lambda d1, d2: mse_ml_values(d1, d2, cfg)
            assert _second_difference(objective, solution.t_star, derive_grid(cfg)) > 0

    def test_axis_below_threshold(self) -> None:
        xi1 = threshold_xi1(derive_grid(_gaussian(15, 0.0)))
        solution = solve_ml(SystemConfig.from_snr(4, 4, 15, 0.5 * xi1))
        assert solution.region == REGION_AXIS_Y
        assert solution.t_star is None
        assert solution.d1 < 1e-6 * solution.d2

    def test_no_threshold_scans_full_equation(self) -> None:
        solution = solve_ml(_gaussian(2, 10.0))
        assert solution.region in (REGION_MAIN_FULL, REGION_AXIS_Y)
        if solution.region == REGION_MAIN_FULL:
            assert solution.kkt_residual <= KKT_TOLERANCE

    def test_rejects_cauchy(self) -> None:
        with pytest.raises(UnsupportedNoiseError):
            solve_ml(SystemConfig.from_snr_db(4, 4, 5, 10.0, noise_kind="cauchy"))

    @pytest.mark.slow
    @pytest.mark.parametrize("snr_db", [0.0, 10.0, 20.0])
    def test_matches_grid_search(self, snr_db: float) -> None:
        cfg = _gaussian(10, snr_db)
        grid = derive_grid(cfg)
        ts = np.linspace(-0.5, 0.5, GRID_POINTS)[1:-1]
        d1 = grid.scale * grid.upsilon1 * np.sqrt(0.5 - ts)
        d2 = grid.scale * grid.upsilon2 * np.sqrt(0.5 + ts)
        searched = float(np.min(mse_ml_values(d1, d2, cfg)))
        assert mse_ml(solve_ml(cfg).spacing, cfg).total <= searched * (1 + 1e-9)

    @pytest.mark.slow
    def test_random_configs_match_grid_search(self) -> None:
        rng = np.random.default_rng(MC_SEED)
        ts = np.linspace(-0.5, 0.5, GRID_POINTS)[1:-1]
        cell = ts[1] - ts[0]
        for _ in range(RANDOM_CONFIGS):
            q, n = (int(v) for v in rng.integers(2, 9, size=2))
            K = int(rng.integers(2, 21))
            unit = derive_grid(SystemConfig.from_snr(q, n, K, 1.0))
            base = threshold_xi1(unit) if threshold_applies(unit) else 1.0
            cfg = SystemConfig.from_snr(q, n, K, base * 10 ** (rng.uniform(5.0, 30.0) / 10))
            grid = derive_grid(cfg)
            values = mse_ml_values(grid.scale * grid.upsilon1 * np.sqrt(0.5 - ts),
                                   grid.scale * grid.upsilon2 * np.sqrt(0.5 + ts), cfg)
            solution = solve_ml(cfg)
            searched = float(values.min())
            assert mse_ml(solution.spacing, cfg).total <= max(searched * (1 + 1e-9), np.finfo(float).tiny)
            if solution.t_star is not None and searched > 0:
                assert abs(solution.t_star - ts[values.argmin()]) <= 2 * cell


class TestMAPSolver:
    """Validate the unique root of the MAP equation."""

    @pytest.mark.parametrize("K, snr_db", [(2, 5.0), (10, 10.0), (20, 25.0)])
    def test_interior_root(self, K: int, snr_db: float) -> None:
        solution = solve_map(_gaussian(K, snr_db))
        assert solution.region == REGION_MAIN_MAP
        assert solution.kkt_residual <= KKT_TOLERANCE
        assert solution.power_residual <= POWER_TOLERANCE

    def test_beats_equal_distance(self) -> None:
        cfg = _gaussian(10, 10.0)
        best = mse_map(solve_map(cfg).spacing, cfg).total
        assert best <= mse_map(equal_distance_spacing(cfg), cfg).total * (1 + 1e-12)

    @pytest.mark.parametrize("K, snr_db", [(2, 5.0), (10, 10.0), (20, 5.0)])
    def test_convex_around_solution(self, K: int, snr_db: float) -> None:
        cfg = _gaussian(K, snr_db)
        grid = derive_grid(cfg)
        t_star = solve_map(cfg).t_star
        objective = lambda d1, d2: mse_map_values(d1, d2, cfg)
        for t in np.linspace(t_star - 0.02, t_star + 0.02, 9):
            if -0.49 < t < 0.49:
                assert _second_difference(objective, t, grid) >= 0

    def test_rejects_cauchy(self) -> None:
        with pytest.raises(UnsupportedNoiseError):
            solve_map(SystemConfig.from_snr_db(4, 4, 5, 10.0, noise_kind="cauchy"))

    @pytest.mark.slow
    @pytest.mark.parametrize("snr_db", [0.0, -10.0])
    def test_map_decoder_wins_at_low_snr(self, snr_db: float) -> None:
        cfg = _gaussian(10, snr_db)
        ml = estimate_mse(cfg, solve_ml(cfg).spacing, DECODER_ML, MC_TRIALS, MC_SEED)
        map_ = estimate_mse(cfg, solve_map(cfg).spacing, DECODER_MAP, MC_TRIALS, MC_SEED)
        assert map_.mean <= ml.mean + 3 * math.hypot(ml.stderr, map_.stderr)

    @pytest.mark.parametrize("K, q", [(10, 4), (20, 6)])
    def test_close_to_ml_at_moderate_snr(self, K: int, q: int) -> None:
        cfg = _gaussian(K, 10.0, q, q)
        ml = mse_ml(solve_ml(cfg).spacing, cfg).total
        map_ = mse_map(solve_map(cfg).spacing, cfg).total
        assert abs(map_ - ml) / ml <= 0.02

    def test_spacing_matches_ml_at_high_snr(self) -> None:
        cfg = _gaussian(10, 40.0)
        ml, map_ = solve_ml(cfg), solve_map(cfg)
        assert map_.d1 == pytest.approx(ml.d1, rel=1e-3)
        assert map_.d2 == pytest.approx(ml.d2, rel=1e-3)

    @pytest.mark.slow
    def test_spacing_matches_ml_for_many_nodes(self) -> None:
        cfg = _gaussian(10_000, 10.0)
        ml, map_ = solve_ml(cfg), solve_map(cfg)
        assert map_.d1 == pytest.approx(ml.d1, rel=1e-2)
        assert map_.d2 == pytest.approx(ml.d2, rel=1e-2)

    @pytest.mark.parametrize("K, snr_db", [(2, 5.0), (10, 10.0), (20, 0.0)])
    def test_equation_is_the_ml_form_at_boosted_snr(self, K: int, snr_db: float) -> None:
        cfg = _gaussian(K, snr_db)
        grid = derive_grid(cfg)
        boosted = derive_grid(SystemConfig.from_snr(cfg.q, cfg.n, K, cfg.eta ** 2 * grid.snr))
        plain = _plain_equation(boosted)
        for t in np.linspace(-0.4, 0.4, 9):
            assert map_equation(grid).value(t) == pytest.approx(plain.value(t), rel=1e-9)
        solution = solve_map(cfg)
        assert plain.log_target(solution.t_star) == pytest.approx(0.0, abs=1e-6)
        np.testing.assert_allclose(ellipse_point(solution.t_star, boosted), (solution.d1, solution.d2), rtol=1e-9)
        best = mse_map(solution.spacing, cfg).total
        # spending only P / eta^2 on the same ellipse direction
        for t in np.linspace(-0.45, 0.45, 19):
            d1, d2 = ellipse_point(t, grid)
            assert mse_map_values(d1 / cfg.eta, d2 / cfg.eta, cfg) >= best


class TestLambertSolver:
    """Validate the high-SNR closed form."""

    def test_close_to_ml_at_high_snr(self) -> None:
        cfg = _gaussian(2, 30.0)
        closed, exact = solve_lambert(cfg), solve_ml(cfg)
        assert closed.region == REGION_CLOSED_FORM
        assert closed.warnings == ()
        assert abs(closed.d1 - exact.d1) / exact.d1 <= 0.01
        assert abs(closed.d2 - exact.d2) / exact.d2 <= 0.01

    def test_warns_at_low_snr(self) -> None:
        solution = solve_lambert(_gaussian(2, 0.0))
        assert solution.warnings
        assert solution.power_residual <= POWER_TOLERANCE

    def test_ratio_rises_toward_one(self) -> None:
        ratios = {}
        for name, solve in (("ml", solve_ml), ("lambert", solve_lambert)):
            solutions = [solve(_gaussian(2, snr_db)) for snr_db in RATIO_SNRS_DB]
            ratios[name] = [s.d1 / s.d2 for s in solutions]
            assert all(a < b for a, b in zip(ratios[name], ratios[name][1:]))
            assert ratios[name][-1] < 1.0
        assert abs(ratios["ml"][-1] - ratios["lambert"][-1]) <= 0.01


class TestCauchySolver:
    """Validate the Cauchy optimizer."""

    def test_interior_solution(self) -> None:
        cfg = SystemConfig.from_snr_db(4, 4, 5, 25.0, noise_kind="cauchy")
        solution = solve_cauchy(cfg)
        assert solution.region == REGION_MAIN_FULL
        assert solution.t_star > 0
        assert solution.kkt_residual <= 1e-10
        best = mse_cauchy(solution.spacing, cfg).total
        assert best <= mse_cauchy(equal_distance_spacing(cfg), cfg).total * (1 + 1e-12)

    def test_rejects_gaussian(self) -> None:
        with pytest.raises(UnsupportedNoiseError):
            solve_cauchy(_gaussian(5, 25.0))
