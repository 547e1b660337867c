import numpy as np
import pytest
from scipy.optimize import brentq

from l2kreg import (
    DataValidationError,
    MomentVector,
    NumericalError,
    RegressionData,
    SolverConfig,
    fit_l2k,
    fit_ols,
    l2k_objective,
    l2k_score,
    sandwich_covariance,
    score_covariance_cross_terms,
    validate_data,
)
from conftest import make_problem
from oracles import grid_refine_minimizer, uniform_moment


class TestFitOls:
    def test_noiseless_is_exact(self):
        rng = np.random.default_rng(0)
        X = np.column_stack([np.ones(30), rng.uniform(-3, 3, 30)])
        beta = np.array([0.7, -1.2])
        data = RegressionData(design=X, response=X @ beta)
        rep = fit_ols(data)
        assert rep.beta_hat == pytest.approx(beta, abs=1e-10)
        assert rep.objective_value == pytest.approx(0.0, abs=1e-18)
        assert rep.covariance == pytest.approx(np.zeros((2, 2)), abs=1e-16)

    def test_intercept_only_gives_mean(self):
        y = np.array([1.0, 4.0, 7.0, 8.0])
        data = RegressionData(design=np.ones((4, 1)), response=y)
        rep = fit_ols(data)
        assert rep.beta_hat[0] == pytest.approx(y.mean(), rel=1e-14)

    def test_three_point_dataset(self):
        # Normal equations solved by hand with Cramer's rule:
        # [3 3; 3 5] b = [4, 7]  =>  b = (-1/6, 3/2).
        data = validate_data([[0.0], [1.0], [2.0]], [0.0, 1.0, 3.0])
        rep = fit_ols(data)
        assert rep.beta_hat == pytest.approx([-1 / 6, 3 / 2], rel=1e-12)

    def test_covariance_is_sigma2_times_inverse(self):
        data, _ = make_problem(5, n=120, noise="normal")
        rep = fit_ols(data)
        r = data.response - data.design @ rep.beta_hat
        sigma2 = np.mean(r ** 2)  # divisor n
        expected = sigma2 * np.linalg.inv(data.design.T @ data.design)
        assert rep.covariance == pytest.approx(expected, rel=1e-10)


class TestObjectiveAndScore:
    def test_zero_at_truth_on_noiseless_data(self):
        rng = np.random.default_rng(1)
        X = np.column_stack([np.ones(20), rng.uniform(-1, 1, 20)])
        beta = np.array([2.0, 3.0])
        data = RegressionData(design=X, response=X @ beta)
        for k in (1, 2, 3):
            assert l2k_objective(data, beta, k) == 0.0

    def test_k1_is_residual_sum_of_squares(self):
        data, _ = make_problem(2)
        beta = np.zeros(data.p)
        rss = float(np.sum(data.response ** 2))
        assert l2k_objective(data, beta, 1) == pytest.approx(rss, rel=1e-14)

    def test_direct_arithmetic_example(self):
        # residuals (1, -2) under k=2: 1 + 16 = 17
        data = RegressionData(design=np.array([[1.0], [1.0]]),
                              response=np.array([1.0, -2.0]))
        assert l2k_objective(data, [0.0], 2) == 17.0

    def test_k1_score_is_ols_score(self):
        data, _ = make_problem(3)
        beta = np.full(data.p, 0.3)
        r = data.response - data.design @ beta
        assert l2k_score(data, beta, 1) == pytest.approx(
            -2 * data.design.T @ r, rel=1e-14)

    def test_score_vanishes_at_minimizer(self):
        data, _ = make_problem(4, noise="uniform")
        rep = fit_l2k(data, 2)
        assert rep.converged
        norm = np.linalg.norm(l2k_score(data, rep.beta_hat, 2))
        assert norm <= rep.gradient_tolerance

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_score_matches_finite_differences(self, k):
        data, _ = make_problem(6, n=80)
        rng = np.random.default_rng(11)
        beta = rng.uniform(-1, 1, data.p)
        g = l2k_score(data, beta, k)
        h = 1e-6
        for j in range(data.p):
            e = np.zeros(data.p)
            e[j] = h
            fd = (l2k_objective(data, beta + e, k)
                  - l2k_objective(data, beta - e, k)) / (2 * h)
            assert g[j] == pytest.approx(fd, rel=1e-5)


class TestFitL2k:
    def test_noiseless_exact_for_all_orders(self):
        rng = np.random.default_rng(8)
        X = np.column_stack([np.ones(25), rng.uniform(-2, 2, 25)])
        beta = np.array([1.5, -0.5])
        data = RegressionData(design=X, response=X @ beta)
        for k in (2, 3):
            rep = fit_l2k(data, k)
            assert rep.converged
            assert rep.objective_value == pytest.approx(0.0, abs=1e-30)
            assert rep.beta_hat == pytest.approx(beta, abs=1e-9)

    def test_intercept_only_matches_cubic_root_oracle(self):
        rng = np.random.default_rng(9)
        y = rng.uniform(0, 4, 50) ** 2
        data = RegressionData(design=np.ones((50, 1)), response=y)
        rep = fit_l2k(data, 2)
        # first-order condition: sum (y - a)^3 = 0, a scalar root
        alpha = brentq(lambda a: np.sum((y - a) ** 3), y.min(), y.max(),
                       xtol=1e-12)
        assert rep.beta_hat[0] == pytest.approx(alpha, abs=1e-8)

    def test_two_parameter_fit_matches_grid_oracle(self):
        data, _ = make_problem(12, n=150, p=2, noise="uniform")
        rep = fit_l2k(data, 2)
        oracle = grid_refine_minimizer(data.design, data.response, 4,
                                       center=fit_ols(data).beta_hat)
        assert rep.beta_hat == pytest.approx(oracle, abs=1e-6)

    def test_objective_never_exceeds_ols_start(self):
        for seed, noise in enumerate(["uniform", "normal", "laplace", "mixture"]):
            for rep_seed in range(8):
                data, _ = make_problem(100 + 31 * seed + rep_seed, n=120, p=3,
                                       noise=noise)
                start = fit_ols(data).beta_hat
                rep = fit_l2k(data, 2)
                assert (l2k_objective(data, rep.beta_hat, 2)
                        <= l2k_objective(data, start, 2) * (1 + 1e-12))

    def test_converged_respects_tolerance(self):
        for seed in range(10):
            data, _ = make_problem(400 + seed, n=150, p=4, noise="mixture")
            rep = fit_l2k(data, 2)
            if rep.converged:
                assert rep.gradient_norm <= rep.gradient_tolerance

    def test_explicit_init_is_used(self):
        data, _ = make_problem(13, noise="uniform")
        ref = fit_l2k(data, 2)
        warm = fit_l2k(data, 2, init=ref.beta_hat)
        assert warm.iterations <= 1
        assert warm.beta_hat == pytest.approx(ref.beta_hat, abs=1e-9)

    def test_k_bounds(self):
        data, _ = make_problem(14)
        with pytest.raises(DataValidationError):
            fit_l2k(data, 1)
        with pytest.raises(DataValidationError):
            fit_l2k(data, 4)

    def test_covariance_psd_and_std_errors(self):
        for seed in range(6):
            data, _ = make_problem(600 + seed, n=150, p=3, noise="mixture")
            rep = fit_l2k(data, 2)
            eig = np.linalg.eigvalsh(rep.covariance)
            assert eig.min() >= -1e-10 * max(np.trace(rep.covariance), 1e-300)
            assert rep.std_errors == pytest.approx(
                np.sqrt(np.diag(rep.covariance)), rel=1e-12)

    def test_config_validation(self):
        with pytest.raises(DataValidationError):
            SolverConfig(gradient_tolerance=-1.0)
        with pytest.raises(DataValidationError):
            SolverConfig(max_iterations=0)
        with pytest.raises(DataValidationError):
            SolverConfig(line_search_shrink=1.0)


class TestSandwichCovariance:
    def test_k1_reduces_to_ols_form(self):
        S = np.array([[4.0, 1.0], [1.0, 3.0]])
        m = MomentVector(mu=(0.0, 2.5), provenance="population")
        V = sandwich_covariance(S, m, 1, 100)
        assert V == pytest.approx(2.5 * np.linalg.inv(S), rel=1e-12)

    def test_k2_symmetric_errors(self):
        # V = mu_6 / (9 mu_2^2) S^-1 when mu_3 = 0
        S = np.diag([5.0, 2.0])
        m = MomentVector(mu=(0.0, 1.0, 0.0, 3.0, 0.0, 15.0),
                         provenance="population")
        V = sandwich_covariance(S, m, 2, 50)
        assert V == pytest.approx((15.0 / 9.0) * np.linalg.inv(S), rel=1e-12)

    def test_uniform_variance_ratio_three_sevenths(self):
        # intercept-only design: S = [[n]]; Var(a4)/Var(a2) = mu6/(9 mu2^3)
        n, a = 400, 1.0
        S = np.array([[float(n)]])
        m = MomentVector(
            mu=tuple(uniform_moment(a, r) for r in range(1, 7)),
            provenance="population")
        v4 = sandwich_covariance(S, m, 2, n)[0, 0]
        v2 = sandwich_covariance(S, m, 1, n)[0, 0]
        assert v4 / v2 == pytest.approx(3 / 7, rel=1e-12)

    def test_rejects_large_k(self):
        m = MomentVector(mu=(0.0,) + (1.0,) * 11, provenance="population")
        with pytest.raises(DataValidationError, match="k <= 3"):
            sandwich_covariance(np.eye(2), m, 4, 10)

    def test_rejects_missing_orders(self):
        m = MomentVector(mu=(0.0, 1.0, 0.0, 3.0), provenance="population")
        with pytest.raises(DataValidationError, match="order"):
            sandwich_covariance(np.eye(2), m, 2, 10)

    def test_rejects_degenerate_low_moment(self):
        m = MomentVector(mu=(0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
                         provenance="population")
        with pytest.raises(NumericalError):
            sandwich_covariance(np.eye(2), m, 2, 10)


class TestCrossTermIdentity:
    @pytest.mark.parametrize("n,p", [(5, 2), (8, 3), (12, 4)])
    def test_difference_is_minus_gram_matrix(self, n, p):
        rng = np.random.default_rng(n * 100 + p)
        X = np.column_stack(
            [np.ones(n, dtype=np.int64),
             rng.integers(-5, 6, size=(n, p - 1))]).astype(np.int64)
        pairwise, outer = score_covariance_cross_terms(X)
        assert np.array_equal(pairwise - outer, -(X.T @ X))
