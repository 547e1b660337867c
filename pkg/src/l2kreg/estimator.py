"""Fitting linear models under even-power losses.

The loss of order 2k is ``sum_i (y_i - x_i' beta)^(2k)``; k=1 is ordinary
least squares and is solved through the normal equations, k >= 2 by damped
Newton with backtracking. The objective is convex (an even power composed
with an affine map), so any stationary point is a global minimum.

Coefficient covariances follow the M-estimator sandwich
``A^-1 B A^-1`` with, per observation,

    A = 2k(2k-1) * mu_{2k-2} * S      B = (2k)^2 * (mu_{4k-2} - mu_{2k-1}^2) * S

where S = X'X and mu_r are the central moments of the error distribution,
giving

    V = (mu_{4k-2} - mu_{2k-1}^2) / ((2k-1)^2 * mu_{2k-2}^2) * S^-1.

For k=1 this is the familiar sigma^2 (X'X)^-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import EstimateReport, MomentVector, RegressionData
from .errors import DataValidationError, NumericalError
from .moments import sample_central_moments

MAX_K = 3  # loss orders 2, 4, 6; higher orders need moments beyond order 12

_CONDITION_LIMIT = 1e12
_MAX_BACKTRACKS = 60


@dataclass(frozen=True)
class SolverConfig:
    """Newton solver settings.

    ``gradient_tolerance=None`` resolves to 4e-9 times a per-problem scale
    (n times response-rms^(2k-1) times the largest design-column rms), which
    tracks the natural size of the score. Newton's final step usually lands
    orders of magnitude below this; the margin only guards against declaring
    failure when the objective is already at its float64 floor.
    """

    gradient_tolerance: float | None = None
    max_iterations: int = 200
    line_search_shrink: float = 0.5

    def __post_init__(self):
        if self.gradient_tolerance is not None and self.gradient_tolerance <= 0:
            raise DataValidationError("gradient_tolerance must be > 0")
        if self.max_iterations < 1:
            raise DataValidationError("max_iterations must be >= 1")
        if not 0.0 < self.line_search_shrink < 1.0:
            raise DataValidationError("line_search_shrink must lie in (0, 1)")


def _effective_tolerance(data: RegressionData, k: int, config: SolverConfig) -> float:
    if config.gradient_tolerance is not None:
        return config.gradient_tolerance
    y = data.response
    sy = max(1.0, float(np.sqrt(np.mean((y - y.mean()) ** 2))))
    sx = max(1.0, float(np.max(np.sqrt(np.mean(data.design ** 2, axis=0)))))
    return 4e-9 * data.n * sy ** (2 * k - 1) * sx


def l2k_objective(data: RegressionData, beta, k: int) -> float:
    """Loss of order 2k at ``beta``: sum of residuals to the 2k-th power."""
    if k < 1:
        raise DataValidationError("k must be >= 1")
    r = data.response - data.design @ np.asarray(beta, dtype=float)
    return float(np.sum(r ** (2 * k)))


def l2k_score(data: RegressionData, beta, k: int) -> np.ndarray:
    """Gradient of :func:`l2k_objective`: -2k * X' r^(2k-1)."""
    if k < 1:
        raise DataValidationError("k must be >= 1")
    r = data.response - data.design @ np.asarray(beta, dtype=float)
    return -2 * k * (data.design.T @ (r ** (2 * k - 1)))


def _l2k_hessian(data: RegressionData, beta, k: int) -> np.ndarray:
    r = data.response - data.design @ np.asarray(beta, dtype=float)
    w = r ** (2 * k - 2)
    return 2 * k * (2 * k - 1) * (data.design.T * w) @ data.design


def sandwich_covariance(S, residual_moments: MomentVector, k: int, n: int) -> np.ndarray:
    """M-estimator covariance of the order-2k coefficient estimate.

    ``S`` is X'X (sums over all n observations), so the returned matrix is the
    covariance of the estimator itself, not of its sqrt(n) scaling.
    """
    if k < 1:
        raise DataValidationError("k must be >= 1")
    if k > MAX_K:
        raise DataValidationError(
            f"k={k} needs residual moments of order {4*k-2}; only k <= {MAX_K} supported"
        )
    if n < 1:
        raise DataValidationError("n must be >= 1")
    if residual_moments.order < 4 * k - 2:
        raise DataValidationError(
            f"need residual moments up to order {4*k-2}, have {residual_moments.order}"
        )
    mu_low = residual_moments[2 * k - 2]
    if mu_low <= 0.0:
        raise NumericalError("mu_{2k-2} <= 0: degenerate residual distribution")
    num = residual_moments[4 * k - 2] - residual_moments[2 * k - 1] ** 2
    factor = num / ((2 * k - 1) ** 2 * mu_low ** 2)
    S = np.asarray(S, dtype=float)
    V = factor * np.linalg.inv(S)
    return (V + V.T) / 2.0


def score_covariance_cross_terms(design) -> tuple[np.ndarray, np.ndarray]:
    """Cross-observation product matrices from the score-covariance algebra.

    Returns ``(pairwise, outer)`` where ``pairwise[a, b] = sum_{i != m}
    X[i, a] * X[m, b]`` (computed by the literal double sum) and ``outer`` is
    the outer product of the column totals. Their difference equals -X'X
    exactly; exposed so tests can check that identity on arbitrary designs.
    """
    X = np.asarray(design)
    n, p = X.shape
    pairwise = np.zeros((p, p), dtype=X.dtype)
    for i in range(n):
        for m in range(n):
            if i != m:
                pairwise += np.outer(X[i], X[m])
    sums = X.sum(axis=0)
    return pairwise, np.outer(sums, sums)


def _report(data, k, beta, iterations, converged, tol, ill_conditioned=False):
    n = data.n
    r = data.response - data.design @ beta
    objective = float(np.sum(r ** (2 * k)))
    grad_norm = float(np.linalg.norm(-2 * k * (data.design.T @ (r ** (2 * k - 1)))))
    S = data.design.T @ data.design
    # Degenerate residuals (e.g. a noiseless fit) have zero sampling variance.
    mu2 = float(np.mean((r - r.mean()) ** 2))
    if mu2 <= 0.0:
        cov = np.zeros((data.p, data.p))
    elif k == 1:
        sigma2 = float(np.mean(r ** 2))
        cov = sigma2 * np.linalg.inv(S)
    else:
        mom = sample_central_moments(r, max_order=4 * k - 2)
        cov = sandwich_covariance(S, mom, k, n)
    return EstimateReport(
        loss_order=2 * k,
        beta_hat=beta,
        covariance=cov,
        std_errors=np.sqrt(np.maximum(np.diag(cov), 0.0)),
        objective_value=objective,
        gradient_norm=grad_norm,
        iterations=iterations,
        converged=converged,
        gradient_tolerance=tol,
        ill_conditioned=ill_conditioned,
    )


def fit_ols(data: RegressionData, config: SolverConfig = SolverConfig()) -> EstimateReport:
    """Least-squares fit through the normal equations (loss order 2).

    The residual variance uses divisor n, so the covariance is
    ``(1/n sum r_i^2) (X'X)^-1``.
    """
    X, y = data.design, data.response
    beta = np.linalg.solve(X.T @ X, X.T @ y)
    tol = _effective_tolerance(data, 1, config)
    return _report(data, 1, beta, iterations=0, converged=True, tol=tol)


def fit_l2k(data: RegressionData, k: int, config: SolverConfig = SolverConfig(),
            init=None) -> EstimateReport:
    """Minimize the order-2k loss by damped Newton with backtracking.

    Starts from the least-squares solution unless ``init`` is given. Each
    iteration strictly decreases the objective; if neither the Newton nor the
    steepest-descent direction can improve it (the objective is at its
    floating-point floor), iteration stops and ``converged`` reflects the
    gradient test. A singular Hessian falls back to a gradient step.
    """
    if not 2 <= k <= MAX_K:
        raise DataValidationError(f"k must be in 2..{MAX_K}")
    X, y = data.design, data.response
    p2k = 2 * k
    tol = _effective_tolerance(data, k, config)
    beta = (np.linalg.solve(X.T @ X, X.T @ y) if init is None
            else np.asarray(init, dtype=float).copy())
    if beta.shape != (data.p,):
        raise DataValidationError(f"init must have shape ({data.p},)")

    ill_conditioned = False
    r = y - X @ beta
    for it in range(config.max_iterations):
        f0 = float(np.sum(r ** p2k))
        if f0 == 0.0:
            # All residuals zero: global optimum of a nonnegative objective.
            return _report(data, k, beta, it, True, tol)
        g = -p2k * (X.T @ (r ** (p2k - 1)))
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol:
            return _report(data, k, beta, it, True, tol, ill_conditioned)
        w = r ** (p2k - 2)
        H = p2k * (p2k - 1) * (X.T * w) @ X
        newton_ok = True
        try:
            cond = np.linalg.cond(H)
            if not np.isfinite(cond):
                raise np.linalg.LinAlgError
            if cond > _CONDITION_LIMIT:
                ill_conditioned = True
            d = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            newton_ok = False
            d = -g / max(1.0, gnorm)

        step, r_new, improved = 1.0, r, False
        for _ in range(_MAX_BACKTRACKS):
            cand = beta + step * d
            r_try = y - X @ cand
            if float(np.sum(r_try ** p2k)) < f0:
                beta, r_new, improved = cand, r_try, True
                break
            step *= config.line_search_shrink
        if not improved and newton_ok:
            # Newton direction exhausted; try plain descent before giving up.
            d = -g / max(1.0, gnorm)
            step = 1.0
            for _ in range(_MAX_BACKTRACKS):
                cand = beta + step * d
                r_try = y - X @ cand
                if float(np.sum(r_try ** p2k)) < f0:
                    beta, r_new, improved = cand, r_try, True
                    break
                step *= config.line_search_shrink
        if not improved:
            if gnorm <= tol:
                return _report(data, k, beta, it, True, tol, ill_conditioned)
            # Objective cannot decrease in float64 along any descent direction.
            if it == 0:
                raise NumericalError("no descent direction from the starting point")
            return _report(data, k, beta, it, False, tol, ill_conditioned)
        r = r_new

    return _report(data, k, beta, config.max_iterations, False, tol, ill_conditioned)


def fit(data: RegressionData, loss_order: int,
        config: SolverConfig = SolverConfig()) -> EstimateReport:
    """Fit by loss order (2, 4 or 6); dispatches to OLS or the Newton path."""
    if loss_order % 2 or loss_order < 2:
        raise DataValidationError("loss order must be a positive even integer")
    k = loss_order // 2
    if k == 1:
        return fit_ols(data, config)
    return fit_l2k(data, k, config)
