from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return REPO_ROOT / "data"


@pytest.fixture(scope="session")
def config_dir() -> Path:
    return REPO_ROOT / "configs"


def make_problem(seed: int, n: int = 200, p: int = 2, noise: str = "uniform",
                 beta=None):
    """Random well-scaled regression problem used across test modules."""
    from l2kreg import RegressionData

    rng = np.random.default_rng(seed)
    X = np.column_stack([np.ones(n)] + [rng.uniform(-2, 2, n) for _ in range(p - 1)])
    if beta is None:
        beta = rng.uniform(-2, 2, p)
    beta = np.asarray(beta, dtype=float)
    if noise == "uniform":
        eps = rng.uniform(-1, 1, n)
    elif noise == "normal":
        eps = rng.standard_normal(n)
    elif noise == "laplace":
        eps = rng.laplace(0, 1, n)
    elif noise == "mixture":
        sign = rng.choice([-1.5, 1.5], size=n)
        eps = sign + 0.5 * rng.standard_normal(n)
    else:
        raise ValueError(noise)
    return RegressionData(design=X, response=X @ beta + eps), beta
