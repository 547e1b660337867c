import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2kreg import (
    DataValidationError,
    MomentVector,
    linearization_remainder,
    sample_central_moments,
)


def brute_central_moment(xs, r):
    """Direct-summation oracle, independent of the library path."""
    xs = list(xs)
    mean = sum(xs) / len(xs)
    return sum((x - mean) ** r for x in xs) / len(xs)


class TestSampleCentralMoments:
    def test_degenerate_sample(self):
        m = sample_central_moments([3.5] * 10, max_order=8)
        assert all(m[r] == 0.0 for r in range(2, 9))

    def test_small_sample_against_oracle(self):
        m = sample_central_moments([1, 2, 3, 4], max_order=4)
        # deviations are +-1.5, +-0.5
        assert m[2] == pytest.approx(1.25, abs=0)
        assert m[3] == pytest.approx(0.0, abs=0)
        assert m[4] == pytest.approx(2.5625, abs=0)
        for r in (2, 3, 4):
            assert m[r] == pytest.approx(brute_central_moment([1, 2, 3, 4], r),
                                         rel=1e-14)

    def test_random_sample_against_oracle(self):
        rng = np.random.default_rng(3)
        xs = rng.normal(5.0, 2.0, size=37)
        m = sample_central_moments(xs, max_order=12)
        for r in range(2, 13):
            assert m[r] == pytest.approx(brute_central_moment(xs, r), rel=1e-10)

    def test_divisor_is_n(self):
        # With divisor n-1 the variance of (0, 2) would be 2, not 1.
        m = sample_central_moments([0.0, 2.0], max_order=2)
        assert m[2] == 1.0

    def test_too_short(self):
        with pytest.raises(DataValidationError):
            sample_central_moments([1.0], max_order=2)

    def test_non_finite(self):
        with pytest.raises(DataValidationError):
            sample_central_moments([1.0, np.inf], max_order=2)

    def test_order_bounds(self):
        with pytest.raises(DataValidationError):
            sample_central_moments([1.0, 2.0], max_order=13)
        with pytest.raises(DataValidationError):
            sample_central_moments([1.0, 2.0], max_order=1)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-100, 100), min_size=3, max_size=50),
           st.floats(-1e5, 1e5))
    def test_location_invariance(self, xs, c):
        xs = np.asarray(xs)
        if np.ptp(xs) < 1e-6:
            return
        base = sample_central_moments(xs, max_order=6)
        shifted = sample_central_moments(xs + c, max_order=6)
        for r in range(2, 7):
            scale = max(1.0, abs(base[r]))
            assert shifted[r] == pytest.approx(base[r], abs=1e-9 * scale * 10)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-50, 50), min_size=3, max_size=50),
           st.floats(-4, 4).filter(lambda a: abs(a) > 1e-3))
    def test_scale_equivariance(self, xs, a):
        xs = np.asarray(xs)
        if np.ptp(xs) == 0:
            return
        base = sample_central_moments(xs, max_order=6)
        scaled = sample_central_moments(a * xs, max_order=6)
        for r in range(2, 7):
            assert scaled[r] == pytest.approx(a ** r * base[r], rel=1e-9,
                                              abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=80))
    def test_moment_inequalities(self, xs):
        xs = np.asarray(xs)
        if np.ptp(xs) == 0:
            return
        m = sample_central_moments(xs, max_order=6)
        tol = 1e-10
        assert m[4] >= m[2] ** 2 * (1 - tol)
        assert m[6] * m[2] >= m[4] ** 2 * (1 - tol) - 1e-300
        assert m[6] >= m[3] ** 2 * (1 - tol) - 1e-300


class TestLinearizationRemainder:
    uniform_pop = MomentVector(
        mu=(0.0, 1 / 3, 0.0, 1 / 5, 0.0, 1 / 7), provenance="population")

    def test_constant_sample_at_mean(self):
        pop = MomentVector(mu=(0.0, 0.0), provenance="population")
        assert linearization_remainder([2.0] * 50, 2, 2.0, pop) == 0.0

    def test_r2_reduces_to_centering_identity(self):
        # mu_{r-1} = mu_1 = 0, so the remainder is sqrt(n) mu_hat_2 minus
        # the uncentered quadratic term.
        rng = np.random.default_rng(7)
        xs = rng.normal(0.0, 1.0, size=500)
        pop = MomentVector(mu=(0.0, 1.0), provenance="population")
        rem = linearization_remainder(xs, 2, 0.0, pop)
        n = xs.size
        expected = (np.sqrt(n) * np.mean((xs - xs.mean()) ** 2)
                    - np.sum(xs ** 2) / np.sqrt(n))
        assert rem == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_order_validation(self):
        with pytest.raises(DataValidationError):
            linearization_remainder([1.0, 2.0], 1, 0.0, self.uniform_pop)

    def test_remainder_shrinks_with_n(self):
        # Monte Carlo contract: the median |remainder| at n=1e6 sits below
        # the median at n=1e4, over 200 seeded replications.
        small, large = [], []
        for seed in range(200):
            rng = np.random.default_rng(10_000 + seed)
            small.append(abs(linearization_remainder(
                rng.uniform(-1, 1, 10_000), 3, 0.0, self.uniform_pop)))
            large.append(abs(linearization_remainder(
                rng.uniform(-1, 1, 1_000_000), 3, 0.0, self.uniform_pop)))
        assert np.median(large) < np.median(small)
