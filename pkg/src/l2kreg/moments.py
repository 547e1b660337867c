"""Sample central moments and their first-order linearization."""

from __future__ import annotations

import numpy as np

from .data import MAX_MOMENT_ORDER, MomentVector
from .errors import DataValidationError


def sample_central_moments(sample, max_order: int = MAX_MOMENT_ORDER) -> MomentVector:
    """Plain central moments mu_r = (1/n) sum (x_i - xbar)^r for r = 1..max_order.

    Divisor n throughout (no bias correction). Two passes: mean first, then
    centered powers, so high orders of near-constant samples do not cancel
    catastrophically.
    """
    x = np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise DataValidationError("need a sample of length >= 2")
    if not np.all(np.isfinite(x)):
        raise DataValidationError("sample contains non-finite values")
    if not 2 <= max_order <= MAX_MOMENT_ORDER:
        raise DataValidationError(f"max_order must be in 2..{MAX_MOMENT_ORDER}")
    d = x - x.mean()
    mu = [0.0]  # mu_1 is zero by construction
    pw = d.copy()
    for _ in range(2, max_order + 1):
        pw *= d
        mu.append(float(pw.mean()))
    return MomentVector(mu=tuple(mu), provenance="sample")


def linearization_remainder(sample, r: int, true_mean: float,
                            population: MomentVector) -> float:
    """Remainder of the first-order expansion of sqrt(n) * mu_hat_r.

    Returns sqrt(n)*mu_hat_r minus its linearization
    (1/sqrt(n)) sum (x_i - mu)^r  -  r * mu_{r-1} * (1/sqrt(n)) sum (x_i - mu),
    where mu and the population moments are supplied by the caller. The
    remainder vanishes in probability as n grows; this exists for tests.
    """
    if r < 2:
        raise DataValidationError("order r must be >= 2")
    x = np.asarray(sample, dtype=float).ravel()
    n = x.size
    mu_hat_r = float(np.mean((x - x.mean()) ** r))
    d = x - true_mean
    lead = float(np.sum(d ** r)) / np.sqrt(n)
    mu_rm1 = population[r - 1] if r - 1 >= 1 else 1.0
    correction = r * mu_rm1 * float(np.sum(d)) / np.sqrt(n)
    return np.sqrt(n) * mu_hat_r - (lead - correction)
