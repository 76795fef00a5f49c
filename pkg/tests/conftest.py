import numpy as np
import pytest

from gaussbound.states import GaussianState
from gaussbound.symplectic import random_symplectic


def random_state(rng, n, nu_range=(1.0, 10.0), mean_range=3.0, intensity=0.5):
    """Random symplectic image of a random product thermal state, randomly displaced."""
    nu = rng.uniform(*nu_range, size=n)
    S = random_symplectic(int(rng.integers(2**31)), n, intensity)
    cov = S @ np.diag(np.repeat(nu, 2)) @ S.T
    mean = rng.uniform(-mean_range, mean_range, size=2 * n)
    return GaussianState(mean, 0.5 * (cov + cov.T))


def random_spd(rng, m, spread=1.0):
    A = rng.standard_normal((m, m)) * spread
    return A @ A.T + 0.1 * np.eye(m)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
