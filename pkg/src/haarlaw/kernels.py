"""Random streams and scalar variate generators.

All randomness flows from an :class:`RngStream`. Substreams are derived with
numpy's :class:`~numpy.random.SeedSequence`: substream ``i`` of a stream with
spawn key ``k`` gets spawn key ``k + (i,)`` under the same root entropy, and
SeedSequence hashes (entropy, spawn key) into the PCG64 state. Distinct keys
give independent streams, and the derivation does not depend on how many
substreams were requested before.

Every sampler takes ``size=None`` like numpy: ``None`` returns a scalar,
otherwise an array of that shape.
"""

import numpy as np

__all__ = [
    "RngStream",
    "as_stream",
    "sample_uniform_phase",
    "sample_beta_1_s",
    "sample_bernoulli",
    "sample_complex_gaussian",
    "sample_sphere_point",
    "sample_kn_alpha",
]

TWO_PI = 2.0 * np.pi


class RngStream:
    """Deterministic, splittable source of uniform doubles.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit root seed.
    key : tuple of int
        Spawn key; the root stream has ``()``.
    """

    def __init__(self, seed=0, key=()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.key = tuple(int(k) for k in key)
        self._seq = np.random.SeedSequence(seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.PCG64(self._seq))

    def substream(self, index):
        """Independent child stream number `index` (same for every call)."""
        if index < 0:
            raise ValueError("substream index must be nonnegative")
        return RngStream(self.seed, self.key + (int(index),))

    def uniform(self, size=None):
        """Uniform doubles in [0, 1)."""
        return self.generator.random(size)

    def normal(self, size=None):
        return self.generator.standard_normal(size)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key={self.key})"


def as_stream(rng):
    """Accept an RngStream or an integer seed."""
    if isinstance(rng, RngStream):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng))
    raise TypeError(f"expected RngStream or int seed, got {type(rng).__name__}")


def _scalar(x, size):
    return x.item() if size is None else x


def sample_uniform_phase(rng, size=None):
    """``exp(i theta)`` with theta uniform on [0, 2 pi)."""
    theta = TWO_PI * np.asarray(as_stream(rng).uniform(size))
    return _scalar(np.exp(1j * theta), size)


def sample_beta_1_s(s, rng, size=None):
    """Beta(1, s) by inverse CDF, ``X = 1 - U**(1/s)``.

    `s` may be an array broadcastable against `size`.

    Raises
    ------
    ValueError
        If any ``s <= 0``.
    """
    s = np.asarray(s, dtype=float)
    if np.any(~(s > 0)):
        raise ValueError("Beta(1, s) needs s > 0")
    if size is None and s.ndim:
        size = s.shape
    u = np.asarray(as_stream(rng).uniform(size))
    # 1 - exp(log(u)/s) without cancellation for large s
    x = -np.expm1(np.log(u) / s)
    return _scalar(x, size)


def sample_bernoulli(p, rng, size=None):
    p = np.asarray(p, dtype=float)
    if np.any(~((p >= 0) & (p <= 1))):
        raise ValueError("Bernoulli probability must lie in [0, 1]")
    if size is None and p.ndim:
        size = p.shape
    u = np.asarray(as_stream(rng).uniform(size))
    return _scalar((u < p).astype(np.int64), size)


def sample_complex_gaussian(rng, size=None):
    """Standard complex Gaussian: Re, Im iid N(0, 1/2), so ``E|z|^2 = 1``."""
    rng = as_stream(rng)
    shape = () if size is None else size
    z = rng.normal(shape + (2,) if isinstance(shape, tuple) else (shape, 2))
    z = (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)
    return _scalar(z, size)


def sample_sphere_point(n, rng, size=None):
    """Uniform point on the unit sphere of C^n.

    Normalized vector of iid complex Gaussians; a zero vector (probability
    zero) is redrawn.

    Returns
    -------
    ndarray, shape ``(n,)`` or ``size + (n,)``
    """
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    rng = as_stream(rng)
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    g = sample_complex_gaussian(rng, shape + (n,))
    norm = np.linalg.norm(g, axis=-1)
    bad = norm == 0
    while np.any(bad):
        g[bad] = sample_complex_gaussian(rng, (int(bad.sum()), n))
        norm = np.linalg.norm(g, axis=-1)
        bad = norm == 0
    return g / norm[..., None]


def sample_kn_alpha(s, rng, size=None):
    """Disk variable with density ``(s/pi) (1 - |z|^2)^(s-1)``.

    Drawn as ``exp(i theta) * sqrt(Beta(1, s))``. For ``s = 0`` the law is
    the uniform measure on the unit circle.

    Parameters
    ----------
    s : int or array of int
        Nonnegative shape parameter.
    """
    s = np.asarray(s)
    if np.any(s < 0):
        raise ValueError("shape parameter s must be >= 0")
    if size is None and s.ndim:
        size = s.shape
    rng = as_stream(rng)
    phase = np.asarray(sample_uniform_phase(rng, size))
    pos = np.maximum(s, 1)
    b = np.asarray(sample_beta_1_s(np.broadcast_to(pos, phase.shape), rng, phase.shape))
    radius = np.where(s == 0, 1.0, np.sqrt(b))
    return _scalar(phase * radius, size)
