import numpy as np
import pytest

from priorank import ComparisonMatrix


def random_reciprocal_entries(n: int, rng: np.random.Generator, sigma: float = 1.0) -> np.ndarray:
    """Reciprocal matrix with lognormal upper triangle."""
    a = np.ones((n, n))
    iu, ju = np.triu_indices(n, 1)
    values = np.exp(rng.normal(scale=sigma, size=iu.size))
    a[iu, ju] = values
    a[ju, iu] = 1.0 / values
    return a


def random_explicit_entries(n: int, rng: np.random.Generator, sigma: float = 1.0) -> np.ndarray:
    """Fully independent off-diagonal entries: non-reciprocal margins."""
    a = np.exp(rng.normal(scale=sigma, size=(n, n)))
    np.fill_diagonal(a, 1.0)
    return a


@pytest.fixture
def margin_2x2() -> ComparisonMatrix:
    """The running 2x2 example with a dealer margin: 2.1 one way, 0.55 back."""
    return ComparisonMatrix(np.array([[1.0, 2.1], [0.55, 1.0]]))
