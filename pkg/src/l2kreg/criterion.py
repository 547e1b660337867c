"""Efficiency criterion: when does an even-power loss beat least squares.

The order-4 estimator is asymptotically more precise than least squares
iff (mu_6 - mu_3^2) / (9 mu_2^3) < 1, where mu_r are central moments of the
error distribution. This module evaluates that ratio from moment vectors,
in closed form for a catalogue of distribution families, and by adaptive
quadrature for densities given only as functions. It also provides the
order-2k generalizations (against least squares and against order 2k-2)
and locates family-parameter boundaries where the criterion flips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special, stats

from .data import MomentVector
from .errors import DataValidationError, NumericalError

_QUAD_ABS_TOL = 1e-12
_QUAD_ERR_LIMIT = 1e-8

FAMILY_PARAMETERS = {
    "u_shaped": "k",
    "uniform": None,
    "normal": None,
    "laplace": None,
    "beta": ("a", "b"),
    "gaussian_mixture": "c",
    "truncated_normal": "c",
    "raised_cosine": "b",
    "sub_gaussian": "k",
    "pearson_plus": "a",
    "pearson_minus": "a",
}


@dataclass(frozen=True)
class FamilySpec:
    """A named error-distribution family with its parameters."""

    family: str
    a: float | None = None
    b: float | None = None
    c: float | None = None
    k: float | None = None

    def __post_init__(self):
        if self.family not in FAMILY_PARAMETERS:
            raise DataValidationError(f"unknown family {self.family!r}")
        f = self.family
        if f == "u_shaped":
            if self.k is None or self.k < 1 or self.k != int(self.k):
                raise DataValidationError("u_shaped needs a positive integer k")
        elif f == "beta":
            if self.a is None or self.b is None or self.a <= 0 or self.b <= 0:
                raise DataValidationError("beta needs a > 0 and b > 0")
        elif f == "gaussian_mixture":
            if self.c is None:
                raise DataValidationError("gaussian_mixture needs separation c")
        elif f == "truncated_normal":
            if self.c is None or self.c <= 0:
                raise DataValidationError("truncated_normal needs c > 0")
        elif f == "raised_cosine":
            if self.b is None or self.b <= 0:
                raise DataValidationError("raised_cosine needs b > 0")
        elif f == "sub_gaussian":
            if self.k is None or self.k <= 0:
                raise DataValidationError("sub_gaussian needs k > 0")
        elif f == "pearson_plus":
            if self.a is None:
                raise DataValidationError("pearson_plus needs exponent a")
        elif f == "pearson_minus":
            if self.a is None or self.a <= -1:
                raise DataValidationError("pearson_minus needs a > -1")


@dataclass(frozen=True)
class CriterionResult:
    """Value of the efficiency ratio and the preference it implies."""

    ratio: float
    prefers_l4: bool
    method: str  # "closed_form" or "quadrature"

    def __post_init__(self):
        if self.prefers_l4 != (self.ratio < 1.0):
            raise DataValidationError("prefers_l4 must equal (ratio < 1)")
        if self.method not in ("closed_form", "quadrature"):
            raise DataValidationError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class ComparisonRatio:
    """The two published forms of an order-2k efficiency comparison.

    ``direct_form`` normalizes the odd-moment variance by powers of the error
    variance alone; ``sandwich_form`` is the exact ratio of the two sandwich
    covariances. They coincide at k=2 and diverge for k >= 3.
    """

    direct_form: float
    sandwich_form: float


def efficiency_ratio(m: MomentVector) -> CriterionResult:
    """(mu_6 - mu_3^2) / (9 mu_2^3); below 1 favors the order-4 loss."""
    if m.order < 6:
        raise DataValidationError("need moments up to order 6")
    if m[2] <= 0.0:
        raise NumericalError("mu_2 = 0: degenerate distribution")
    ratio = (m[6] - m[3] ** 2) / (9.0 * m[2] ** 3)
    return CriterionResult(ratio=ratio, prefers_l4=ratio < 1.0, method="closed_form")


def ols_comparison_ratio(m: MomentVector, k: int) -> ComparisonRatio:
    """Order-2k loss versus least squares; below 1 favors order 2k.

    direct_form   = Var(e^(2k-1)) / ((2k-1)^2 * mu_2^(2k-1))
    sandwich_form = Var(e^(2k-1)) / ((2k-1)^2 * mu_{2k-2}^2 * mu_2)
    """
    if k < 2 or k > 3:
        raise DataValidationError("k must be 2 or 3")
    if m.order < 4 * k - 2:
        raise DataValidationError(f"need moments up to order {4*k-2}")
    if m[2] <= 0.0:
        raise NumericalError("mu_2 = 0: degenerate distribution")
    var_odd = m[4 * k - 2] - m[2 * k - 1] ** 2
    denom = (2 * k - 1) ** 2
    return ComparisonRatio(
        direct_form=var_odd / (denom * m[2] ** (2 * k - 1)),
        sandwich_form=var_odd / (denom * m[2 * k - 2] ** 2 * m[2]),
    )


def adjacent_comparison_ratio(m: MomentVector, k: int) -> ComparisonRatio:
    """Order-2k loss versus order 2k-2; below 1 favors order 2k.

    direct_form   = Var(e^(2k-1)) (2k-3)^2 / ((2k-1)^2 Var(e^(2k-3)) mu_2^2)
    sandwich_form = Var(e^(2k-1)) (2k-3)^2 mu_{2k-4}^2
                    / ((2k-1)^2 Var(e^(2k-3)) mu_{2k-2}^2)
    """
    if k < 2 or k > 3:
        raise DataValidationError("k must be 2 or 3")
    if m.order < 4 * k - 2:
        raise DataValidationError(f"need moments up to order {4*k-2}")
    if m[2] <= 0.0:
        raise NumericalError("mu_2 = 0: degenerate distribution")
    var_hi = m[4 * k - 2] - m[2 * k - 1] ** 2
    var_lo = m[4 * k - 6] - m[2 * k - 3] ** 2  # k=2: Var(e) = mu_2
    if var_lo <= 0.0:
        raise NumericalError("lower-order variance is degenerate")
    num = var_hi * (2 * k - 3) ** 2
    den = (2 * k - 1) ** 2 * var_lo
    return ComparisonRatio(
        direct_form=num / (den * m[2] ** 2),
        sandwich_form=num * m[2 * k - 4] ** 2 / (den * m[2 * k - 2] ** 2),
    )


# ---------------------------------------------------------------------------
# Closed-form moment helpers for the supported families
# ---------------------------------------------------------------------------

def normal_central_moment(r: int, sigma: float = 1.0) -> float:
    """Central moment of N(mu, sigma^2): 0 for odd r, sigma^r (r-1)!! for even."""
    if r % 2:
        return 0.0
    return sigma ** r * float(np.prod(np.arange(1, r, 2, dtype=float))) if r else 1.0


def t_central_moment(r: int, df: int) -> float:
    """Central moment of Student t with df degrees of freedom (needs r < df)."""
    if r >= df:
        raise NumericalError(f"t moment of order {r} does not exist for df={df}")
    if r % 2:
        return 0.0
    j = r // 2
    num = df ** j * float(np.prod(np.arange(1, r, 2, dtype=float)))
    den = float(np.prod([df - 2 * i for i in range(1, j + 1)]))
    return num / den if r else 1.0


def beta_raw_moments(a: float, b: float, max_order: int) -> list[float]:
    """Raw moments of Beta(a, b): prod_{i<r} (a+i)/(a+b+i), starting at order 0."""
    out = [1.0]
    for i in range(max_order):
        out.append(out[-1] * (a + i) / (a + b + i))
    return out


def central_from_raw(raw: list[float]) -> list[float]:
    """Convert raw moments (index 0..R) to central moments via the binomial sum."""
    mean = raw[1]
    out = [1.0]
    for r in range(1, len(raw)):
        out.append(sum(math.comb(r, i) * raw[i] * (-mean) ** (r - i)
                       for i in range(r + 1)))
    return out


def location_mixture_moments(offsets, weights, component_moment,
                             max_order: int) -> MomentVector:
    """Central moments of a mixture of location-shifted copies of one shape.

    ``offsets`` are component means, ``component_moment(r)`` the central
    moments of the common shape around its own mean. Uses the binomial
    convolution around the mixture mean.
    """
    offsets = np.asarray(offsets, dtype=float)
    w = np.asarray(weights, dtype=float)
    if offsets.size != w.size or offsets.size == 0:
        raise DataValidationError("offsets and weights must align and be non-empty")
    w = w / w.sum()
    grand = float(w @ offsets)
    delta = offsets - grand
    mu = [0.0]
    for r in range(2, max_order + 1):
        total = 0.0
        for dj, wj in zip(delta, w):
            total += wj * sum(math.comb(r, i) * dj ** (r - i) * component_moment(i)
                              for i in range(r + 1))
        mu.append(total)
    return MomentVector(mu=tuple(mu), provenance="population")


def shape_mixture_moments(component_central, component_means, weights,
                          max_order: int) -> MomentVector:
    """Central moments of a mixture whose components differ in shape.

    ``component_central[j]`` lists central moments (index 0..max_order) of
    component j around its own mean ``component_means[j]``.
    """
    means = np.asarray(component_means, dtype=float)
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    grand = float(w @ means)
    mu = [0.0]
    for r in range(2, max_order + 1):
        total = 0.0
        for cm, mj, wj in zip(component_central, means, w):
            d = mj - grand
            total += wj * sum(math.comb(r, i) * d ** (r - i) * cm[i]
                              for i in range(r + 1))
        mu.append(total)
    return MomentVector(mu=tuple(mu), provenance="population")


def mixture_separation_margin(c: float) -> float:
    """Sign-determining polynomial for the balanced two-normal mixture.

    Equals mu_6 - 9 mu_2^3 of the mixture with component means +/- c*sigma
    (in units of sigma^6): 6 + 18 c^2 - 12 c^4 - 8 c^6. Negative values mean
    the order-4 loss wins.
    """
    c2 = c * c
    return 6.0 + 18.0 * c2 - 12.0 * c2 ** 2 - 8.0 * c2 ** 3


def gaussian_mixture_moments(c: float, max_order: int = 6) -> MomentVector:
    """Central moments of the balanced N(-c, 1)/N(+c, 1) mixture."""
    return location_mixture_moments(
        offsets=(-c, c), weights=(0.5, 0.5),
        component_moment=lambda r: normal_central_moment(r, 1.0),
        max_order=max_order)


def truncated_normal_even_moments(c: float, max_order: int = 6) -> dict[int, float]:
    """Even central moments of the standard normal truncated to [-c, c].

    Downward recursion mu_{2j} = -c^(2j-1) e^(-c^2/2) / Delta + (2j-1) mu_{2j-2}
    with Delta = sqrt(2 pi) (Phi(c) - 1/2).
    """
    delta = math.sqrt(2.0 * math.pi) * (stats.norm.cdf(c) - 0.5)
    e = math.exp(-c * c / 2.0)
    out = {0: 1.0}
    for j in range(1, max_order // 2 + 1):
        out[2 * j] = -c ** (2 * j - 1) * e / delta + (2 * j - 1) * out[2 * j - 2]
    return out


# ---------------------------------------------------------------------------
# Quadrature path
# ---------------------------------------------------------------------------

def _quad(f, lo, hi):
    val, err = integrate.quad(f, lo, hi, epsabs=_QUAD_ABS_TOL, epsrel=_QUAD_ABS_TOL,
                              limit=200)
    if err > _QUAD_ERR_LIMIT:
        raise NumericalError(f"quadrature did not converge (error estimate {err:g})")
    return val


def moments_by_quadrature(density, lower: float, upper: float,
                          max_order: int = 6) -> MomentVector:
    """Central moments of a (possibly unnormalized) density on [lower, upper]."""
    z = _quad(density, lower, upper)
    if z <= 0.0:
        raise NumericalError("density does not integrate to a positive mass")
    mean = _quad(lambda x: x * density(x), lower, upper) / z
    mu = [0.0]
    for r in range(2, max_order + 1):
        mu.append(_quad(lambda x: (x - mean) ** r * density(x), lower, upper) / z)
    return MomentVector(mu=tuple(mu), provenance="population")


def criterion_by_quadrature(density, lower: float, upper: float) -> CriterionResult:
    """Efficiency ratio for an arbitrary density, via adaptive quadrature."""
    m = moments_by_quadrature(density, lower, upper, max_order=6)
    base = efficiency_ratio(m)
    return CriterionResult(ratio=base.ratio, prefers_l4=base.prefers_l4,
                           method="quadrature")


# ---------------------------------------------------------------------------
# Family dispatch
# ---------------------------------------------------------------------------

def family_criterion(spec: FamilySpec) -> CriterionResult:
    """Efficiency ratio for a named family, closed form where one exists."""
    f = spec.family
    if f == "u_shaped":
        k = int(spec.k)
        ratio = (2 * k + 3) ** 3 / (9.0 * (2 * k + 1) ** 2 * (2 * k + 7))
    elif f == "uniform":
        ratio = 3.0 / 7.0
    elif f == "normal":
        ratio = 15.0 / 9.0
    elif f == "laplace":
        ratio = math.factorial(6) / 72.0
    elif f == "beta":
        central = central_from_raw(beta_raw_moments(spec.a, spec.b, 6))
        return efficiency_ratio(MomentVector(
            mu=(0.0, central[2], central[3], central[4], central[5], central[6]),
            provenance="population"))
    elif f == "gaussian_mixture":
        return efficiency_ratio(gaussian_mixture_moments(float(spec.c)))
    elif f == "truncated_normal":
        mom = truncated_normal_even_moments(float(spec.c))
        ratio = mom[6] / (9.0 * mom[2] ** 3)
    elif f == "raised_cosine":
        pi = math.pi
        mu6 = (pi ** 6 - 42 * pi ** 4 + 840 * pi ** 2 - 5040) / (7 * pi ** 6)
        mu2 = (pi ** 2 - 6) / (3 * pi ** 2)
        ratio = mu6 / (9.0 * mu2 ** 3)  # the b^6 scale factors cancel
    elif f == "sub_gaussian":
        a = 1.0 / (2.0 * spec.k)
        ratio = (special.gamma(a) ** 2 * special.gamma(7 * a)
                 / (9.0 * special.gamma(3 * a) ** 3))
    elif f == "pearson_plus":
        return criterion_by_quadrature(lambda x: (1.0 + x * x) ** spec.a, -1.0, 1.0)
    elif f == "pearson_minus":
        return criterion_by_quadrature(lambda x: (1.0 - x * x) ** spec.a, -1.0, 1.0)
    else:  # pragma: no cover - guarded by FamilySpec validation
        raise DataValidationError(f"unknown family {f!r}")
    return CriterionResult(ratio=float(ratio), prefers_l4=ratio < 1.0,
                           method="closed_form")


def _make_spec(family: str, value: float) -> FamilySpec:
    param = FAMILY_PARAMETERS.get(family)
    if param is None or isinstance(param, tuple):
        raise DataValidationError(
            f"family {family!r} has no single free parameter to sweep")
    return FamilySpec(family=family, **{param: value})


def family_margin(family: str, value: float) -> float:
    """Signed distance of the family criterion from its boundary at ``value``.

    For the Gaussian mixture this is the separation polynomial; for every
    other single-parameter family it is ``ratio - 1``. Zero crossings mark
    the parameter boundary between the two preferences.
    """
    if family == "gaussian_mixture":
        return mixture_separation_margin(value)
    return family_criterion(_make_spec(family, value)).ratio - 1.0


def boundary_root(family: str, bracket: tuple[float, float],
                  tol: float = 1e-6) -> float:
    """Bisect the family margin to locate the preference boundary.

    ``bracket`` must straddle a sign change. The result is accurate to ``tol``
    in the parameter.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo >= hi:
        raise DataValidationError("bracket must satisfy lo < hi")
    flo = family_margin(family, lo)
    fhi = family_margin(family, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NumericalError(
            f"margin does not change sign on [{lo}, {hi}] for {family!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = family_margin(family, mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def parameter_sweep(family: str, start: float, stop: float,
                    count: int = 101) -> list[tuple[float, float]]:
    """Tabulate (parameter, ratio) along a grid; feeds plots and reports."""
    if count < 2:
        raise DataValidationError("sweep needs at least 2 grid points")
    values = np.linspace(start, stop, count)
    out = []
    for v in values:
        if family == "u_shaped":
            v = float(max(1, round(v)))
        out.append((float(v), family_criterion(_make_spec(family, v)).ratio))
    return out
