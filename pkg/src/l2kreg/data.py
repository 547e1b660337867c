"""Core data model: regression problems, moment vectors, and fit reports.

All containers are immutable after construction (arrays are frozen with
``setflags(write=False)``) and therefore safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataValidationError

MAX_MOMENT_ORDER = 12


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class RegressionData:
    """A validated linear-regression problem ``y = X @ beta + eps``.

    ``design`` is n x p with an explicit all-ones intercept column first;
    use :func:`validate_data` to build one from raw arrays.
    """

    design: np.ndarray
    response: np.ndarray

    def __post_init__(self):
        X = _frozen(np.atleast_2d(self.design))
        y = _frozen(np.asarray(self.response, dtype=float).ravel())
        object.__setattr__(self, "design", X)
        object.__setattr__(self, "response", y)
        n, p = X.shape
        if y.shape[0] != n:
            raise DataValidationError(
                f"response length {y.shape[0]} != design row count {n}"
            )
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataValidationError("design/response contain non-finite entries")
        if not np.all(X[:, 0] == 1.0):
            raise DataValidationError("first design column must be all ones")
        if n < p + 1:
            raise DataValidationError(f"need n >= p + 1, got n={n}, p={p}")
        if np.linalg.matrix_rank(X) < p:
            raise DataValidationError("design matrix is rank deficient")

    @property
    def n(self) -> int:
        return self.design.shape[0]

    @property
    def p(self) -> int:
        return self.design.shape[1]


def validate_data(design, response, add_intercept: bool = True) -> RegressionData:
    """Validate raw arrays and return a :class:`RegressionData`.

    If the first column of ``design`` is not all ones, an intercept column is
    prepended when ``add_intercept`` is true; otherwise validation fails.
    """
    X = np.atleast_2d(np.asarray(design, dtype=float))
    if X.shape[0] == 1 and np.asarray(response).size != 1:
        X = X.T
    has_ones = X.shape[1] > 0 and np.all(X[:, 0] == 1.0)
    if not has_ones:
        if not add_intercept:
            raise DataValidationError(
                "design has no leading intercept column and add_intercept=False"
            )
        X = np.column_stack([np.ones(X.shape[0]), X])
    return RegressionData(design=X, response=np.asarray(response, dtype=float))


@dataclass(frozen=True)
class MomentVector:
    """Central moments mu_1..mu_order of a distribution or sample.

    ``mu`` is the 1-indexed sequence (mu_1, mu_2, ...); indexing the object
    with ``m[r]`` returns mu_r, with the conventions mu_0 = 1 and mu_1 = 0.
    ``provenance`` is ``"sample"`` or ``"population"``.
    """

    mu: tuple = field()
    provenance: str = "population"

    def __post_init__(self):
        vals = tuple(float(v) for v in self.mu)
        object.__setattr__(self, "mu", vals)
        if self.provenance not in ("sample", "population"):
            raise DataValidationError(f"unknown provenance {self.provenance!r}")
        if len(vals) < 2:
            raise DataValidationError("need at least mu_1 and mu_2")
        if len(vals) > MAX_MOMENT_ORDER:
            raise DataValidationError(f"moment order capped at {MAX_MOMENT_ORDER}")
        if not all(np.isfinite(v) for v in vals):
            raise DataValidationError("non-finite moment")
        if vals[0] != 0.0:
            raise DataValidationError("mu_1 must be exactly 0")
        if vals[1] < 0.0:
            raise DataValidationError("mu_2 must be nonnegative")
        # Cauchy-Schwarz bounds, with slack for float roundoff.
        slack = 1e-9
        if len(vals) >= 4 and vals[3] < vals[1] ** 2 * (1.0 - slack) - 1e-300:
            raise DataValidationError("mu_4 < mu_2^2 violates Cauchy-Schwarz")
        if len(vals) >= 6 and vals[5] < vals[2] ** 2 * (1.0 - slack) - 1e-300:
            raise DataValidationError("mu_6 < mu_3^2 violates Cauchy-Schwarz")

    @property
    def order(self) -> int:
        return len(self.mu)

    @property
    def sigma2(self) -> float:
        return self.mu[1]

    def __getitem__(self, r: int) -> float:
        if r == 0:
            return 1.0
        if not 1 <= r <= self.order:
            raise IndexError(f"moment order {r} outside 1..{self.order}")
        return self.mu[r - 1]


@dataclass(frozen=True)
class EstimateReport:
    """Result of one even-power loss fit.

    ``covariance`` is the estimated covariance of the coefficient vector
    itself (the asymptotic covariance of sqrt(n)*(beta_hat - beta) divided
    by n); ``std_errors`` is the square root of its diagonal.
    """

    loss_order: int
    beta_hat: np.ndarray
    covariance: np.ndarray
    std_errors: np.ndarray
    objective_value: float
    gradient_norm: float
    iterations: int
    converged: bool
    gradient_tolerance: float
    ill_conditioned: bool = False

    def __post_init__(self):
        if self.loss_order < 2 or self.loss_order % 2:
            raise DataValidationError("loss_order must be an even integer >= 2")
        object.__setattr__(self, "beta_hat", _frozen(self.beta_hat))
        object.__setattr__(self, "std_errors", _frozen(self.std_errors))
        cov = np.asarray(self.covariance, dtype=float)
        object.__setattr__(self, "covariance", _frozen((cov + cov.T) / 2.0))
        if self.objective_value < 0:
            raise DataValidationError("objective_value must be >= 0")


@dataclass(frozen=True)
class FitQuality:
    """Relative-gain pseudo R-squared of a fit.

    ``q_fit``/``q_zero`` are the (negated-loss) objective values of the fitted
    and intercept-only models; ``q_max`` is the best attainable value, which is
    0 for every even-power loss.
    """

    q_fit: float
    q_zero: float
    q_max: float
    r2_rg: float

    def __post_init__(self):
        slack = 1e-9 * max(1.0, abs(self.q_zero))
        if not (self.q_zero <= self.q_fit + slack and self.q_fit <= self.q_max + slack):
            raise DataValidationError("expected q_zero <= q_fit <= q_max")
