"""Haar samplers for U(n) and the phased permutation group.

Two independent constructions of Haar measure on U(n):

* Ginibre: QR of an iid complex Gaussian matrix with positive diag(R).
* Recursive: ``G_k = R(v_k) (1 + G_{k-1})`` where ``v_k`` is uniform on the
  unit sphere of C^k and ``R(v)`` is the complex reflection sending e_1 to v.

A phased permutation is stored sparsely as ``(sigma, phases)`` and stands for
the matrix with entry ``phases[j]`` at ``(i, j)`` whenever ``j = sigma[i]``.
Indices are 0-based.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import (
    as_stream,
    sample_complex_gaussian,
    sample_sphere_point,
    sample_uniform_phase,
)
from .linalg import as_matrix, as_vector, householder_qr

__all__ = [
    "PhasedPermutation",
    "CycleDecomposition",
    "sample_haar_unitary_ginibre",
    "reflection_to",
    "sample_haar_recursive",
    "stabilizer_embed",
    "sample_phased_permutation",
    "cycle_decompose",
    "det_id_minus_phased_permutation",
    "dense",
]


def sample_haar_unitary_ginibre(n, rng, size=None):
    """Haar unitary from the QR factorization of a Ginibre matrix.

    Returns an ``(n, n)`` matrix, or ``(size, n, n)`` when `size` is given.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    shape = (n, n) if size is None else (size, n, n)
    Z = sample_complex_gaussian(as_stream(rng), shape)
    Q, _ = householder_qr(Z)
    return Q


def reflection_to(v, tol=1e-14):
    """Unitary reflection ``R`` with ``R e_1 = v``.

    ``R = Id - w w* / (1 - <v, e_1>)`` with ``w = e_1 - v``; R fixes the
    orthogonal complement of w. Returns Id when ``v == e_1`` exactly.

    Raises
    ------
    ValueError
        If `v` is not a unit vector, or if ``1 - <v, e_1>`` is below `tol`
        while ``v != e_1`` (the caller should redraw v).
    """
    v = as_vector(v)
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("reflection target must be a unit vector")
    n = v.shape[0]
    w = -v.copy()
    w[0] += 1.0
    if not np.any(w):
        return np.eye(n, dtype=complex)
    denom = 1.0 - np.conj(v[0])
    if abs(denom) < tol:
        raise ValueError("reflection is numerically unstable for this target")
    return np.eye(n, dtype=complex) - np.outer(w, w.conj()) / denom


def stabilizer_embed(H):
    """Block matrix ``1 (+) H``, which fixes e_1."""
    H = as_matrix(H, batch=False)
    m = H.shape[0]
    out = np.zeros((m + 1, m + 1), dtype=complex)
    out[0, 0] = 1.0
    out[1:, 1:] = H
    return out


def sample_haar_recursive(n, rng):
    """Haar unitary built one dimension at a time from reflections."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_stream(rng)
    G = np.array([[sample_uniform_phase(rng)]])
    for k in range(2, n + 1):
        while True:
            v = sample_sphere_point(k, rng)
            try:
                R = reflection_to(v)
            except ValueError:
                continue
            break
        G = R @ stabilizer_embed(G)
    return G


@dataclass(frozen=True)
class PhasedPermutation:
    """Element of the phased permutation group.

    Attributes
    ----------
    sigma : ndarray of int
        Permutation of ``0..n-1``.
    phases : ndarray of complex
        Unimodular weights, one per column.
    """

    sigma: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=np.int64)
        phases = np.asarray(self.phases, dtype=complex)
        n = sigma.shape[0]
        if sigma.ndim != 1 or n < 1 or phases.shape != (n,):
            raise ValueError("sigma and phases must be 1-D of the same positive length")
        if not np.array_equal(np.sort(sigma), np.arange(n)):
            raise ValueError("sigma is not a permutation of 0..n-1")
        if np.any(np.abs(np.abs(phases) - 1.0) > 1e-12):
            raise ValueError("phases must be unimodular")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "phases", phases)

    @property
    def n(self):
        return self.sigma.shape[0]

    def compose(self, other):
        """Phased permutation whose dense matrix is ``dense(self) @ dense(other)``."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        sigma = other.sigma[self.sigma]
        inv = np.empty_like(other.sigma)
        inv[other.sigma] = np.arange(self.n)
        return PhasedPermutation(sigma, other.phases * self.phases[inv])


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: list
    cycle_phases: np.ndarray

    @property
    def lengths(self):
        return [len(c) for c in self.cycles]

    @property
    def count(self):
        return len(self.cycles)


def _fisher_yates(n, rng, size):
    """Uniform permutations, shape ``(size, n)``, vectorized over the batch."""
    perm = np.broadcast_to(np.arange(n), (size, n)).copy()
    rows = np.arange(size)
    for i in range(n - 1, 0, -1):
        j = np.floor(rng.uniform(size) * (i + 1)).astype(np.int64)
        j = np.minimum(j, i)
        tmp = perm[rows, i].copy()
        perm[rows, i] = perm[rows, j]
        perm[rows, j] = tmp
    return perm


def sample_phased_permutation(n, rng):
    """Uniform permutation (Fisher-Yates) with iid uniform phases."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_stream(rng)
    sigma = _fisher_yates(n, rng, 1)[0]
    return PhasedPermutation(sigma, sample_uniform_phase(rng, n))


def sample_phased_permutations(n, rng, size):
    """Batch version: arrays ``sigma (size, n)`` and ``phases (size, n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_stream(rng)
    sigma = _fisher_yates(n, rng, size)
    return sigma, sample_uniform_phase(rng, (size, n))


def cycle_decompose(p):
    """Cycles of ``p.sigma``; each cycle's phase is the product of its entries' phases."""
    n = p.n
    seen = np.zeros(n, dtype=bool)
    cycles, phases = [], []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        weight = 1.0 + 0j
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            weight *= p.phases[i]
            i = p.sigma[i]
        cycles.append(cycle)
        phases.append(weight)
    return CycleDecomposition(cycles, np.array(phases))


def det_id_minus_phased_permutation(p):
    """``det(Id - p)`` as the product of ``1 - cycle phase`` over cycles, O(n)."""
    return complex(np.prod(1.0 - cycle_decompose(p).cycle_phases))


def batch_cycle_stats(sigma, phases):
    """Cycle counts and ``det(Id - p)`` for a batch of phased permutations.

    Parameters
    ----------
    sigma, phases : ndarray, shape (m, n)

    Returns
    -------
    counts : ndarray of int, shape (m,)
    dets : ndarray of complex, shape (m,)
    """
    m, n = sigma.shape
    rows = np.arange(m)
    seen = np.zeros((m, n), dtype=bool)
    counts = np.zeros(m, dtype=np.int64)
    dets = np.ones(m, dtype=complex)
    # walk every cycle from its smallest index
    for start in range(n):
        new = ~seen[:, start]
        counts += new
        weight = np.where(new, 1.0 + 0j, 0.0)
        cur = np.full(m, start)
        active = new.copy()
        while np.any(active):
            r = rows[active]
            c = cur[active]
            seen[r, c] = True
            weight[r] *= phases[r, c]
            nxt = sigma[r, c]
            cur[r] = nxt
            active[r] = ~seen[r, nxt]
        dets = np.where(new, dets * (1.0 - weight), dets)
    return counts, dets


def dense(p):
    """Materialize ``p`` as an ``n x n`` unitary matrix (oracle use only)."""
    n = p.n
    M = np.zeros((n, n), dtype=complex)
    M[np.arange(n), p.sigma] = p.phases[p.sigma]
    return M
