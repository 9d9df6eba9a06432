"""Tests for the threshold polynomials, root scans and the SNR threshold."""

import numpy as np
import pytest

from core.errors import DomainError, MonotonicityError, RootBracketError, ThresholdNotApplicableError
from core.model import SystemConfig, coefficient_table, derive_grid
from solvers.polynomials import p1_root_bound, poly_p1, poly_p2, poly_p3, poly_p4
from solvers.roots import bisect_increasing, find_positive_roots, p1_roots, p2_roots, verify_monotone
from solvers.threshold import (
    IN_PHASE, threshold_applies, threshold_approx, threshold_lower_bound, threshold_point, threshold_xi1,
)

# sign changes of P1 for N = 9, solved directly from its definition
N9_ROOTS = (0.0183074, 0.1250659)
THRESHOLD_KS = (10, 15, 20, 30, 50, 100)


def _grid(q: int, n: int, K: int):
    return derive_grid(SystemConfig.from_snr(q, n, K, 1.0))


class TestPolynomials:
    """Validate the exponential and rational sums."""

    def test_domain(self) -> None:
        with pytest.raises(DomainError):
            poly_p1(10, 0.0)
        with pytest.raises(DomainError):
            poly_p2(10, np.array([1.0, -1.0]))

    @pytest.mark.parametrize("N", [4, 9, 25, 120])
    def test_p2_derivative_is_minus_p1_over_x2(self, N: int) -> None:
        h = 1e-6
        for x in (0.5, 0.8, 1.1):
            slope = (poly_p2(N, x + h) - poly_p2(N, x - h)) / (2 * h)
            assert slope == pytest.approx(-poly_p1(N, x) / x ** 2, rel=1e-5, abs=1e-9)

    def test_vectorised(self) -> None:
        xs = np.array([0.1, 0.5, 2.0])
        np.testing.assert_allclose(poly_p1(12, xs), [poly_p1(12, x) for x in xs])

    def test_cauchy_sums_at_zero_limit(self) -> None:
        # both kernels tend to 1 as x -> 0
        total = coefficient_table(15).gamma.sum()
        assert poly_p3(15, 1e-9) == pytest.approx(total, rel=1e-9)
        assert poly_p4(15, 1e-9) == pytest.approx(total, rel=1e-9)


class TestP1Roots:
    """Validate the root trichotomy of P1."""

    @pytest.mark.parametrize("N", range(3, 9))
    def test_no_roots_for_small_grids(self, N: int) -> None:
        assert p1_roots(N).root_count == 0

    def test_two_roots_for_nine(self) -> None:
        report = p1_roots(9)
        assert report.root_count == 2
        np.testing.assert_allclose(report.roots, N9_ROOTS, rtol=1e-5)
        for root in report.roots:
            assert poly_p1(9, 0.99 * root) * poly_p1(9, 1.01 * root) < 0

    def test_one_root_for_larger_grids(self) -> None:
        for N in range(10, 201):
            report = p1_roots(N)
            assert report.root_count == 1, N
            assert report.largest < p1_root_bound(N)

    def test_largest_without_roots(self) -> None:
        with pytest.raises(RootBracketError):
            _ = p1_roots(5).largest

    def test_p2_roots(self) -> None:
        assert p2_roots(9).root_count == 0
        np.testing.assert_allclose(p2_roots(10).roots, [0.04628998], rtol=1e-5)
        for N in range(10, 61):
            report = p2_roots(N)
            assert report.root_count == 1, N
            assert report.largest < p1_roots(N).largest


class TestRootHelpers:
    """Validate generic root location."""

    def test_find_positive_roots(self) -> None:
        report = find_positive_roots(lambda x: (x - 0.5) * (x - 3.0), 10.0)
        np.testing.assert_allclose(report.roots, [0.5, 3.0], atol=1e-10)

    def test_bisect_increasing(self) -> None:
        assert bisect_increasing(lambda t: t - 0.125, -0.4, 0.4, "line") == pytest.approx(0.125, abs=1e-14)

    def test_bisect_without_sign_change(self) -> None:
        with pytest.raises(RootBracketError):
            bisect_increasing(lambda t: t + 1.0, -0.4, 0.4, "shifted")

    def test_monotonicity_check(self) -> None:
        with pytest.raises(MonotonicityError):
            verify_monotone(lambda t: t * t - 0.01, -0.4, 0.4, "parabola")
        with pytest.raises(MonotonicityError):
            bisect_increasing(lambda t: -t, -0.4, 0.4, "decreasing")


class TestThreshold:
    """Validate the SNR threshold below which an axis solution is optimal."""

    def test_not_applicable_for_small_grids(self) -> None:
        grid = _grid(4, 4, 2)
        assert not threshold_applies(grid)
        with pytest.raises(ThresholdNotApplicableError):
            threshold_xi1(grid)

    def test_in_phase_branch(self) -> None:
        point = threshold_point(_grid(4, 4, 15))
        assert point.branch == IN_PHASE
        assert point.x > 0 and point.y > 0
        assert point.xi1 == pytest.approx(15 * point.x ** 2 / 12 + 15 * point.y ** 2 / 12)

    def test_decreasing_in_K(self) -> None:
        values = [threshold_xi1(_grid(4, 4, K)) for K in THRESHOLD_KS]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_close_to_large_grid_approximation(self) -> None:
        grid = _grid(4, 4, 15)
        ratio = threshold_xi1(grid) / threshold_approx(grid)
        assert 0.5 <= ratio <= 2.0

    @pytest.mark.parametrize("K", [10, 20, 50])
    def test_consistent_with_lower_bound(self, K: int) -> None:
        grid = _grid(4, 4, K)
        assert threshold_xi1(grid) >= 0.5 * threshold_lower_bound(grid)

    def test_independent_of_snr(self) -> None:
        low = derive_grid(SystemConfig.from_snr(4, 4, 20, 0.01))
        high = derive_grid(SystemConfig.from_snr(4, 4, 20, 1000.0))
        assert threshold_xi1(low) == threshold_xi1(high)

    def test_small_grid_exact_and_approximate(self) -> None:
        grid = _grid(5, 2, 2)
        point = threshold_point(grid)
        assert point.branch == IN_PHASE
        assert point.x == pytest.approx(N9_ROOTS[1], rel=1e-5)
        assert 10 * np.log10(threshold_approx(grid)) == pytest.approx(-1.249, abs=0.01)
        assert 10 * np.log10(point.xi1) == pytest.approx(-6.62, abs=0.05)
