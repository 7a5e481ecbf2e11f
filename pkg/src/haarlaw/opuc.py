"""Orthogonal polynomials on the unit circle.

Conventions: monic polynomials ``Phi_j`` satisfy the Szego recursion

    Phi_{j+1}(z)  = z Phi_j(z) - conj(alpha_j) Phi*_j(z)
    Phi*_{j+1}(z) = Phi*_j(z) - alpha_j z Phi_j(z)

with ``Phi*_j(z) = z^j conj(Phi_j(1/conj(z)))``. The spectral measure of
``(G, e_1)`` has moments ``c_k = <e_1, G^k e_1>`` and the inner product
``<z^a, z^b> = c_{b-a}``.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import as_stream, sample_kn_alpha
from .linalg import as_matrix, lu_det

__all__ = [
    "VerblunskySequence",
    "MomentSequence",
    "NotCyclicError",
    "sample_verblunsky_kn",
    "szego_eval",
    "phi_at_one",
    "cmv_from_verblunsky",
    "principal_minor_charpoly",
    "moments_from_matrix",
    "verblunsky_from_moments",
]


class NotCyclicError(ValueError):
    """The moment Gram matrix is singular to working precision."""


@dataclass(frozen=True)
class VerblunskySequence:
    """Coefficients ``alpha_0..alpha_{n-1}``: inside the disk, last one on the circle."""

    alpha: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alpha, dtype=complex))
        if a.ndim != 1 or a.size < 1:
            raise ValueError("need a nonempty 1-D coefficient array")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        if np.any(np.abs(a[:-1]) >= 1.0):
            raise ValueError("alpha_j must lie in the open unit disk for j < n-1")
        if abs(abs(a[-1]) - 1.0) > 1e-10:
            raise ValueError("the last coefficient must be unimodular")
        object.__setattr__(self, "alpha", a)

    @property
    def n(self):
        return self.alpha.shape[0]

    @property
    def rho(self):
        return np.sqrt(np.clip(1.0 - np.abs(self.alpha) ** 2, 0.0, None))


@dataclass(frozen=True)
class MomentSequence:
    """Moments ``c_0..c_k`` of a probability measure on the circle (``c_0 = 1``)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        if c.ndim != 1 or c.size < 1:
            raise ValueError("need at least c_0")
        if abs(c[0] - 1.0) > 1e-10:
            raise ValueError("c_0 must equal 1")
        object.__setattr__(self, "c", c)

    @property
    def n(self):
        return self.c.shape[0] - 1

    def toeplitz(self, order):
        """Gram matrix ``T[a, b] = <z^a, z^b> = c_{b-a}`` of size `order`."""
        if order > self.c.shape[0]:
            raise ValueError("not enough moments for this order")
        k = np.arange(order)
        d = k[None, :] - k[:, None]
        return np.where(d >= 0, self.c[np.abs(d)], np.conj(self.c[np.abs(d)]))


def sample_verblunsky_kn(n, rng):
    """Independent ``alpha_j`` with the Haar-induced law of U(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = n - 1 - np.arange(n)
    return VerblunskySequence(sample_kn_alpha(s, as_stream(rng)))


def sample_verblunsky_batch(n, rng, size):
    """``(size, n)`` array of coefficient rows, each distributed as above."""
    s = n - 1 - np.arange(n)
    return sample_kn_alpha(np.broadcast_to(s, (size, n)), as_stream(rng))


def szego_eval(v, z):
    """All levels of the Szego recursion at `z`.

    Returns
    -------
    phi, phi_star : ndarray of complex, shape (n + 1,)
    """
    z = complex(z)
    phi = np.empty(v.n + 1, dtype=complex)
    star = np.empty(v.n + 1, dtype=complex)
    phi[0] = star[0] = 1.0
    for j, a in enumerate(v.alpha):
        phi[j + 1] = z * phi[j] - np.conj(a) * star[j]
        star[j + 1] = star[j] - a * z * phi[j]
    return phi, star


def phi_at_one(v):
    """``Phi_0(1), ..., Phi_n(1)`` via ``Phi_{j+1}(1) = Phi_j(1) - conj(alpha_j) conj(Phi_j(1))``.

    `v` may also be a raw ``(..., n)`` coefficient array; the recursion is
    then applied row-wise and the result has shape ``(..., n + 1)``.
    """
    alpha = v.alpha if isinstance(v, VerblunskySequence) else np.asarray(v, dtype=complex)
    out = np.empty(alpha.shape[:-1] + (alpha.shape[-1] + 1,), dtype=complex)
    out[..., 0] = 1.0
    for j in range(alpha.shape[-1]):
        p = out[..., j]
        out[..., j + 1] = p - np.conj(alpha[..., j]) * np.conj(p)
    return out


def _theta(a, rho):
    return np.array([[np.conj(a), rho], [rho, -a]])


def cmv_from_verblunsky(v):
    """Five-diagonal unitary CMV matrix ``C = L M``.

    ``L = Theta_0 (+) Theta_2 (+) ...`` and ``M = 1 (+) Theta_1 (+) ...``
    with ``Theta_j = [[conj(a_j), rho_j], [rho_j, -a_j]]``. A block that
    would overflow the dimension is cut to its ``conj(a_{n-1})`` entry.
    """
    if not isinstance(v, VerblunskySequence):
        v = VerblunskySequence(v)
    n = v.n
    a, rho = v.alpha, v.rho

    def blocks(first):
        B = np.zeros((n, n), dtype=complex)
        if first == 1:
            B[0, 0] = 1.0
        for j in range(first, n, 2):
            if j + 1 < n:
                B[j:j + 2, j:j + 2] = _theta(a[j], rho[j])
            else:
                B[j, j] = np.conj(a[j])
        return B

    return blocks(0) @ blocks(1)


def principal_minor_charpoly(C, j, z):
    """``det(z Id_j - C[:j, :j])``."""
    C = as_matrix(C, batch=False)
    n = C.shape[0]
    if not 1 <= j <= n:
        raise ValueError(f"order j must lie in 1..{n}, got {j}")
    return lu_det(z * np.eye(j) - C[:j, :j])


def moments_from_matrix(G, k_max):
    """``c_k = <e_1, G^k e_1>`` for ``k = 0..k_max`` by repeated products with e_1."""
    G = as_matrix(G, batch=False)
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    x = np.zeros(G.shape[0], dtype=complex)
    x[0] = 1.0
    c = np.empty(k_max + 1, dtype=complex)
    c[0] = 1.0
    for k in range(1, k_max + 1):
        x = G @ x
        c[k] = x[0]
    return MomentSequence(c)


def verblunsky_from_moments(m, n=None, tol=1e-10):
    """Recover ``alpha_0..alpha_{n-1}`` from moments ``c_0..c_n``.

    Monic orthogonal polynomials are built degree by degree with classical
    Gram-Schmidt in the moment inner product, and ``alpha_j`` is read off as
    ``-conj(Phi_{j+1}(0))``.

    Raises
    ------
    NotCyclicError
        If a squared norm ``<Phi_j, Phi_j>`` (j < n) falls below `tol`.
    """
    if not isinstance(m, MomentSequence):
        m = MomentSequence(m)
    n = m.n if n is None else n
    if n < 1 or n > m.n:
        raise ValueError(f"need 1 <= n <= {m.n}")
    T = m.toeplitz(n + 1)
    basis = []
    norms = []
    alpha = np.empty(n, dtype=complex)
    for k in range(n + 1):
        p = np.zeros(n + 1, dtype=complex)
        p[k] = 1.0
        proj = T @ p
        for q, nq in zip(basis, norms):
            p = p - (np.vdot(q, proj) / nq) * q
        if k > 0:
            alpha[k - 1] = -np.conj(p[0])
        if k == n:
            break
        norm = np.vdot(p, T @ p).real
        if norm < tol:
            raise NotCyclicError("e_1 is not cyclic or too few moments")
        basis.append(p)
        norms.append(norm)
    return VerblunskySequence(alpha)
