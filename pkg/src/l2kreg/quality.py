"""Relative-gain pseudo R-squared, comparable across loss orders."""

from __future__ import annotations

import numpy as np

from .data import FitQuality, RegressionData
from .errors import NumericalError
from .estimator import SolverConfig, fit, l2k_objective


def pseudo_r2(q_fit: float, q_zero: float, q_max: float = 0.0) -> FitQuality:
    """Relative gain (q_fit - q_zero) / (q_max - q_zero).

    q values are negated losses (maximized objectives); q_max is 0 for every
    even-power loss.
    """
    if q_zero >= q_max:
        raise NumericalError("q_zero must be below q_max (constant response?)")
    r2 = (q_fit - q_zero) / (q_max - q_zero)
    # roundoff can push the ratio a hair outside [0, 1]
    if -1e-9 < r2 < 0.0:
        r2 = 0.0
    elif 1.0 < r2 < 1.0 + 1e-9:
        r2 = 1.0
    return FitQuality(q_fit=q_fit, q_zero=q_zero, q_max=q_max, r2_rg=r2)


def fit_quality(data: RegressionData, beta_hat, loss_order: int,
                config: SolverConfig = SolverConfig()) -> FitQuality:
    """Pseudo R-squared of a fitted coefficient vector under its loss order.

    The intercept-only baseline is refit under the same loss order, so the
    measure compares like with like; for loss order 2 it reduces to the
    classical R-squared.
    """
    k = loss_order // 2
    q_fit = -l2k_objective(data, beta_hat, k)
    ones = RegressionData(design=np.ones((data.n, 1)), response=data.response)
    baseline = fit(ones, loss_order, config)
    q_zero = -baseline.objective_value
    return pseudo_r2(q_fit=q_fit, q_zero=q_zero, q_max=0.0)
