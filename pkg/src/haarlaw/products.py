"""O(n) samplers for det(Id - G) and its logarithm, no matrices involved.

Both product samplers and the log-process samplers are vectorized over a
batch of independent draws. Logs are principal per factor: every factor
``1 - alpha`` with ``|alpha| <= 1`` has nonnegative real part, so summing
principal logs needs no unwinding.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import (
    TWO_PI,
    as_stream,
    sample_bernoulli,
    sample_beta_1_s,
    sample_uniform_phase,
)

__all__ = [
    "LogProcessPath",
    "sample_unitary_product",
    "sample_permutation_product",
    "sample_cycle_count_sum",
    "sample_log_process",
    "log_z_full",
    "log_factor_parts",
]

# bound on factors held in memory at once by the log samplers
_CHUNK_FACTORS = 2_000_000


def _batch(size):
    return 1 if size is None else int(size)


def _out(x, size):
    return x[0].item() if size is None else x


def sample_unitary_product(n, rng, size=None):
    """``prod_{k=1}^n (1 - e^{i theta_k} sqrt(B_k))`` with ``B_k ~ Beta(1, k-1)``, ``B_1 = 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_stream(rng)
    m = _batch(size)
    phase = sample_uniform_phase(rng, (m, n))
    radius = np.ones((m, n))
    if n > 1:
        s = np.arange(1, n, dtype=float)
        radius[:, 1:] = np.sqrt(sample_beta_1_s(np.broadcast_to(s, (m, n - 1)), rng))
    return _out(np.prod(1.0 - phase * radius, axis=1), size)


def sample_permutation_product(n, rng, size=None):
    """``prod_{k=1}^n (1 - e^{i theta_k} X_k)`` with ``X_k ~ Bernoulli(1/k)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_stream(rng)
    m = _batch(size)
    phase = sample_uniform_phase(rng, (m, n))
    x = sample_bernoulli(np.broadcast_to(1.0 / np.arange(1, n + 1), (m, n)), rng)
    return _out(np.prod(1.0 - phase * x, axis=1), size)


def sample_cycle_count_sum(n, rng, size=None):
    """``X_1 + ... + X_n`` with independent ``X_k ~ Bernoulli(1/k)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = _batch(size)
    x = sample_bernoulli(np.broadcast_to(1.0 / np.arange(1, n + 1), (m, n)), as_stream(rng))
    return _out(x.sum(axis=1), size)


def log_factor_parts(s, rng, shape):
    """Real and imaginary parts of ``log(1 - alpha)`` for ``alpha ~ KN(s)``.

    Evaluated in real arithmetic from ``alpha = r e^{i theta}``:
    ``Re = log|1 - alpha|`` and ``Im = atan2(-r sin theta, 1 - r cos theta)``,
    which lies in [-pi/2, pi/2].
    """
    s = np.broadcast_to(np.asarray(s), shape)
    theta = TWO_PI * rng.uniform(shape)
    b = np.where(s == 0, 1.0, sample_beta_1_s(np.maximum(s, 1), rng, shape))
    r = np.sqrt(b)
    rc = r * np.cos(theta)
    rs = r * np.sin(theta)
    with np.errstate(divide="ignore"):
        re = 0.5 * np.log1p(b - 2.0 * rc)
    im = np.arctan2(-rs, 1.0 - rc)
    return re, im


@dataclass(frozen=True)
class LogProcessPath:
    """Partial sums ``L_j = sum_{l<j} log(1 - alpha_l)`` at ``j = floor(n t)``.

    `values` has shape ``(len(t_grid),)`` for one path or
    ``(paths, len(t_grid))`` for a batch.
    """

    n: int
    t_grid: np.ndarray
    values: np.ndarray

    @property
    def indices(self):
        return np.floor(self.n * self.t_grid).astype(np.int64)


def _check_grid(t_grid):
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a nonempty 1-D sequence")
    if np.any(t < 0) or np.any(t >= 1):
        raise ValueError("t values must lie in [0, 1)")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    return t


def sample_log_process(n, t_grid, rng, size=None):
    """Sample the log partial-product process on a grid of times.

    ``alpha_l ~ KN(n - l - 1)`` is drawn for ``l < floor(n max(t))`` and the
    principal logs ``log(1 - alpha_l)`` are accumulated.

    Parameters
    ----------
    n : int
    t_grid : sequence of float
        Strictly increasing, each in [0, 1).
    rng : RngStream or int
    size : int, optional
        Number of independent paths.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    t = _check_grid(t_grid)
    rng = as_stream(rng)
    idx = np.floor(n * t).astype(np.int64)
    m = _batch(size)
    jmax = int(idx[-1])
    values = np.zeros((m, t.size), dtype=complex)
    if jmax > 0:
        s = n - 1 - np.arange(jmax)
        rows = max(1, _CHUNK_FACTORS // jmax)
        for lo in range(0, m, rows):
            hi = min(m, lo + rows)
            re, im = log_factor_parts(s, rng, (hi - lo, jmax))
            cre = np.concatenate([np.zeros((hi - lo, 1)), np.cumsum(re, axis=1)], axis=1)
            cim = np.concatenate([np.zeros((hi - lo, 1)), np.cumsum(im, axis=1)], axis=1)
            values[lo:hi] = cre[:, idx] + 1j * cim[:, idx]
    return LogProcessPath(n, t, values[0] if size is None else values)


def log_z_full(n, rng, size=None):
    """``sum_{l=0}^{n-1} log(1 - alpha_l)`` with Haar-law Verblunsky coefficients.

    The last coefficient is unimodular; the null event ``alpha_{n-1} = 1``
    is redrawn.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_stream(rng)
    m = _batch(size)
    s = n - 1 - np.arange(n)
    out = np.empty(m, dtype=complex)
    rows = max(1, _CHUNK_FACTORS // n)
    for lo in range(0, m, rows):
        hi = min(m, lo + rows)
        re, im = log_factor_parts(s, rng, (hi - lo, n))
        bad = ~np.isfinite(re[:, -1])
        while np.any(bad):
            r2, i2 = log_factor_parts(0, rng, (int(bad.sum()),))
            re[bad, -1], im[bad, -1] = r2, i2
            bad = ~np.isfinite(re[:, -1])
        out[lo:hi] = re.sum(axis=1) + 1j * im.sum(axis=1)
    return _out(out, size)
