import numpy as np
import pytest

from haarlaw.kernels import RngStream


@pytest.fixture
def rng():
    return RngStream(20240607)


@pytest.fixture
def nprng():
    return np.random.default_rng(12345)


def random_complex(nprng, shape):
    return nprng.standard_normal(shape) + 1j * nprng.standard_normal(shape)


def cofactor_det(A):
    """Laplace expansion along the first row; independent of any factorization."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n == 1:
        return A[0, 0]
    total = 0j
    for j in range(n):
        minor = np.delete(A[1:], j, axis=1)
        total += (-1) ** j * A[0, j] * cofactor_det(minor)
    return total


def within_se(samples, target, k=3.0):
    x = np.asarray(samples, dtype=float)
    se = x.std(ddof=1) / np.sqrt(x.size)
    return abs(x.mean() - target) <= k * se
