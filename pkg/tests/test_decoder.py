"""Tests for ML/MAP slicing and the hybrid and N-dimensional decoders."""

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.channel import RngStream, transmit
from core.decoder import decode_map, decode_ml, decode_ndim, slice_axis
from core.encoder import GridSpacing, NDimSpacing, encode_ndim, equal_distance_spacing
from core.errors import DimensionMismatchError, UnsupportedNoiseError
from core.model import CauchyNoise, GaussianNoise, SystemConfig

SEED = 99
ROUND_TRIP_TRIALS = 5_000
CAUCHY_POINTS = 100_000
NEAREST_POINTS = 10_000
POSTERIOR_TRIALS = 20_000


def _posterior_argmax(values, spacing: float, count: int, cfg: SystemConfig) -> np.ndarray:
    """Per-axis index maximising prior(a) * exp(-(y - a*d)^2 / sigma2) under the K-fold aggregate prior."""
    per_node = (count - 1) // cfg.K + 1
    prior = np.ones(1)
    for _ in range(cfg.K):
        prior = np.convolve(prior, np.full(per_node, 1.0 / per_node))
    levels = np.arange(count)
    log_post = np.log(prior)[None, :] - (values[:, None] - levels[None, :] * spacing) ** 2 / cfg.noise.sigma2
    return log_post.argmax(axis=1)


class TestSliceAxis:
    """Validate decision regions on one axis."""

    @pytest.mark.parametrize("value, expected", [
        (-10.0, 0), (0.0, 0), (0.49, 0), (0.5, 0), (0.51, 1), (2.2, 2), (3.5, 3), (3.51, 4), (100.0, 4),
    ])
    def test_nearest_level(self, value: float, expected: int) -> None:
        assert slice_axis(value, 1.0, 5) == expected

    def test_scaled_regions_shrink_toward_centre(self) -> None:
        assert slice_axis(4.0, 1.0, 5, scale=2.0) == 3
        assert slice_axis(0.0, 1.0, 5, scale=2.0) == 1
        assert slice_axis(2.0, 1.0, 5, scale=2.0) == 2

    def test_zero_spacing_returns_centre(self) -> None:
        assert slice_axis(123.0, 0.0, 7) == 3

    @given(st.floats(min_value=-1e6, max_value=1e6), st.integers(min_value=1, max_value=200),
           st.floats(min_value=1.0, max_value=3.0))
    def test_index_in_range(self, value: float, count: int, scale: float) -> None:
        index = slice_axis(value, 0.37, count, scale)
        assert 0 <= index <= count - 1

    def test_vectorised(self) -> None:
        np.testing.assert_array_equal(slice_axis(np.array([0.1, 1.9, 9.0]), 1.0, 4), [0, 2, 3])


class TestGridDecoders:
    """Validate noiseless reconstruction and noise-model checks."""

    @pytest.mark.parametrize("q, n, K", [(2, 2, 1), (4, 4, 10), (6, 4, 5), (3, 7, 4)])
    def test_noiseless_round_trip(self, q: int, n: int, K: int) -> None:
        cfg = SystemConfig(q=q, n=n, K=K, noise=GaussianNoise(0.0))
        sp = GridSpacing(0.3, 0.45)
        rng = RngStream(SEED)
        symbols = rng.generator.integers(0, q * n, size=(ROUND_TRIP_TRIALS, K))
        received = transmit(symbols, sp, cfg, rng)
        np.testing.assert_array_equal(decode_ml(received, sp, cfg), symbols.sum(axis=1))
        np.testing.assert_array_equal(decode_map(received, sp, cfg), symbols.sum(axis=1))

    def test_map_rejects_cauchy(self) -> None:
        cfg = SystemConfig(q=4, n=4, K=2, noise=CauchyNoise(0.1))
        with pytest.raises(UnsupportedNoiseError):
            decode_map(0j, GridSpacing(1.0, 1.0), cfg)

    def test_ml_decisions_do_not_depend_on_noise_model(self) -> None:
        gaussian = SystemConfig(q=4, n=4, K=5, noise=GaussianNoise(0.1))
        cauchy = SystemConfig(q=4, n=4, K=5, noise=CauchyNoise(0.1))
        sp = GridSpacing(0.5, 0.5)
        rng = np.random.default_rng(SEED)
        received = rng.uniform(-8, 8, CAUCHY_POINTS) + 1j * rng.uniform(-8, 8, CAUCHY_POINTS)
        np.testing.assert_array_equal(decode_ml(received, sp, gaussian), decode_ml(received, sp, cauchy))

    def test_scalar_output(self) -> None:
        cfg = SystemConfig(q=4, n=4, K=1)
        assert decode_ml(0j, GridSpacing(1.0, 1.0), cfg) == 5


class TestNDimDecoder:
    """Validate N-dimensional slicing."""

    def test_noiseless_round_trip(self) -> None:
        q, N, K = 4, 3, 5
        cfg = SystemConfig(q=q, n=q, K=K)
        sp = NDimSpacing(d=(0.2, 0.3, 0.5), q=q)
        rng = np.random.default_rng(SEED)
        symbols = rng.integers(0, q ** N, size=(1_000, K))
        received = encode_ndim(symbols, sp).sum(axis=1)
        np.testing.assert_array_equal(decode_ndim(received, sp, cfg), symbols.sum(axis=1))

    def test_dimension_mismatch(self) -> None:
        cfg = SystemConfig(q=4, n=4, K=2)
        with pytest.raises(DimensionMismatchError):
            decode_ndim(np.zeros(2), NDimSpacing(d=(1.0, 1.0, 1.0), q=4), cfg)


class TestDecisionRules:
    """Compare the slicers with brute-force and exact posterior decisions."""

    @pytest.mark.parametrize("K", [1, 2, 3])
    @pytest.mark.parametrize("q, n", [(2, 2), (2, 4), (3, 3), (4, 2), (4, 4)])
    def test_every_symbol_tuple_sums(self, q: int, n: int, K: int) -> None:
        cfg = SystemConfig(q=q, n=n, K=K, noise=GaussianNoise(0.0))
        sp = GridSpacing(0.3, 0.45)
        symbols = np.array(list(itertools.product(range(q * n), repeat=K)))
        received = transmit(symbols, sp, cfg, RngStream(SEED))
        np.testing.assert_array_equal(decode_ml(received, sp, cfg), symbols.sum(axis=1))

    def test_ml_is_nearest_grid_point(self) -> None:
        cfg = SystemConfig(q=4, n=3, K=3)
        sp = GridSpacing(0.4, 0.7)
        origin = cfg.K * sp.offset(cfg.q, cfg.n)
        a, b = np.meshgrid(np.arange(cfg.N1K), np.arange(cfg.N2K), indexing="ij")
        grid = origin + a.ravel() * sp.d1 + 1j * b.ravel() * sp.d2
        rng = np.random.default_rng(SEED)
        received = origin + rng.uniform(-1.0, cfg.N1K * sp.d1, NEAREST_POINTS) \
            + 1j * rng.uniform(-1.0, cfg.N2K * sp.d2, NEAREST_POINTS)
        nearest = np.abs(received[:, None] - grid[None, :]).argmin(axis=1)
        np.testing.assert_array_equal(decode_ml(received, sp, cfg), (a.ravel() + cfg.q * b.ravel())[nearest])

    @pytest.mark.parametrize("factor", [0.25, 3.0, 1e3])
    def test_ml_is_scale_invariant(self, factor: float) -> None:
        cfg = SystemConfig(q=4, n=4, K=5)
        sp = GridSpacing(0.3, 0.5)
        rng = np.random.default_rng(SEED)
        received = rng.normal(0.0, 3.0, NEAREST_POINTS) + 1j * rng.normal(0.0, 3.0, NEAREST_POINTS)
        scaled = GridSpacing(factor * sp.d1, factor * sp.d2)
        np.testing.assert_array_equal(decode_ml(factor * received, scaled, cfg), decode_ml(received, sp, cfg))

    @pytest.mark.slow
    def test_posterior_argmax_makes_fewest_errors(self) -> None:
        cfg = SystemConfig.from_snr_db(4, 4, 5, 0.0)
        sp = equal_distance_spacing(cfg)
        rng = RngStream(SEED)
        symbols = rng.generator.integers(0, cfg.q * cfg.n, size=(POSTERIOR_TRIALS, cfg.K))
        received = transmit(symbols, sp, cfg, rng)
        y = received - cfg.K * sp.offset(cfg.q, cfg.n)
        truth_a, truth_b = symbols % cfg.q, symbols // cfg.q
        axes = [(y.real, truth_a.sum(axis=1), sp.d1, cfg.N1K), (y.imag, truth_b.sum(axis=1), sp.d2, cfg.N2K)]
        for values, truth, spacing, count in axes:
            best = _posterior_argmax(values, spacing, count, cfg)
            ml = slice_axis(values, spacing, count)
            shrunk = slice_axis(values, spacing, count, cfg.eta)
            for other in (ml, shrunk):
                disagreements = np.count_nonzero(best != other)
                slack = 3 * np.sqrt(max(disagreements, 1))
                assert np.count_nonzero(best != truth) <= np.count_nonzero(other != truth) + slack
