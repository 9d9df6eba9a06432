"""Tests for the multiple-access channel and its random streams."""

import numpy as np
import pytest

from core.channel import RngStream, sample_noise, superimpose, transmit
from core.encoder import GridSpacing, encode
from core.errors import DimensionMismatchError, InvalidConfigError
from core.model import CauchyNoise, GaussianNoise, SystemConfig

SEED = 2024
NOISE_DRAWS = 200_000


class TestRngStream:
    """Validate reproducibility and independence of streams."""

    def test_same_key_same_draws(self) -> None:
        a = RngStream(SEED, 3).generator.random(8)
        b = RngStream(SEED, 3).generator.random(8)
        np.testing.assert_array_equal(a, b)

    def test_distinct_streams_differ(self) -> None:
        a = RngStream(SEED, 0).generator.random(8)
        b = RngStream(SEED, 1).generator.random(8)
        assert not np.array_equal(a, b)

    def test_negative_seed(self) -> None:
        with pytest.raises(InvalidConfigError):
            RngStream(-1)


class TestSuperimpose:
    """Validate the noiseless superposition."""

    def test_sum(self) -> None:
        assert superimpose([1 + 1j, 2 - 3j, -0.5j]) == pytest.approx(3 - 2.5j)

    def test_rows(self) -> None:
        np.testing.assert_allclose(superimpose(np.array([[1, 2], [3, 4]])), [3, 7])

    def test_empty(self) -> None:
        with pytest.raises(DimensionMismatchError):
            superimpose([])


class TestNoise:
    """Validate noise statistics."""

    def test_gaussian_component_variance(self) -> None:
        sigma2 = 0.8
        z = sample_noise(GaussianNoise(sigma2), RngStream(SEED), size=NOISE_DRAWS)
        assert np.var(z.real) == pytest.approx(sigma2 / 2, rel=0.02)
        assert np.var(z.imag) == pytest.approx(sigma2 / 2, rel=0.02)
        assert np.mean(np.abs(z) ** 2) == pytest.approx(sigma2, rel=0.02)

    def test_cauchy_scale(self) -> None:
        gamma = 0.3
        z = sample_noise(CauchyNoise(gamma), RngStream(SEED), size=NOISE_DRAWS)
        assert np.median(np.abs(z.real)) == pytest.approx(gamma, rel=0.02)
        assert np.median(np.abs(z.imag)) == pytest.approx(gamma, rel=0.02)

    def test_scalar_draw(self) -> None:
        assert isinstance(sample_noise(GaussianNoise(1.0), RngStream(SEED)), complex)

    def test_zero_noise(self) -> None:
        z = sample_noise(GaussianNoise(0.0), RngStream(SEED), size=10)
        np.testing.assert_array_equal(z, np.zeros(10))


class TestTransmit:
    """Validate the received signal."""

    def test_noiseless(self) -> None:
        cfg = SystemConfig(q=4, n=4, K=3, noise=GaussianNoise(0.0))
        sp = GridSpacing(0.4, 0.6)
        symbols = np.array([[0, 5, 15], [7, 7, 2]])
        received = transmit(symbols, sp, cfg, RngStream(SEED))
        np.testing.assert_allclose(received, encode(symbols, sp, cfg).sum(axis=1))

    def test_single_transmission(self) -> None:
        cfg = SystemConfig(q=4, n=4, K=2, noise=GaussianNoise(0.0))
        sp = GridSpacing(1.0, 1.0)
        assert transmit([0, 15], sp, cfg, RngStream(SEED)) == pytest.approx(0j)

    def test_wrong_node_count(self) -> None:
        cfg = SystemConfig(q=4, n=4, K=3)
        with pytest.raises(DimensionMismatchError):
            transmit([1, 2], GridSpacing(1.0, 1.0), cfg, RngStream(SEED))
