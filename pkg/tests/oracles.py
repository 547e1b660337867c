"""Independent oracles shared by unit and acceptance tests.

These deliberately avoid the library's solution paths: grid search instead
of Newton, double factorials instead of the gamma function, literal sums
instead of vectorized identities.
"""

import numpy as np


def grid_refine_minimizer(X, y, p2k, center, half_width=0.5, grid=41,
                          rounds=40, shrink=0.5):
    """Minimize sum((y - X b)^p2k) over 2-vectors b by iterated grid search."""
    assert X.shape[1] == 2
    c = np.asarray(center, dtype=float).copy()
    w = float(half_width)
    for _ in range(rounds):
        b0 = np.linspace(c[0] - w, c[0] + w, grid)
        b1 = np.linspace(c[1] - w, c[1] + w, grid)
        B = np.array([(a, b) for a in b0 for b in b1])
        R = y[:, None] - X @ B.T
        obj = np.sum(R ** p2k, axis=0)
        c = B[np.argmin(obj)]
        w *= shrink
    return c


def normal_even_moment(r):
    """(r-1)!! by literal multiplication; central moment of N(0, 1)."""
    assert r % 2 == 0
    out = 1
    for i in range(1, r, 2):
        out *= i
    return float(out)


def uniform_moment(a, r):
    """Central moment of U(-a, a): a^r / (r+1) for even r, else 0."""
    return a ** r / (r + 1) if r % 2 == 0 else 0.0
