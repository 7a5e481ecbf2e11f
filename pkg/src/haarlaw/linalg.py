"""Dense complex linear algebra on numpy arrays.

Every routine accepts a single square matrix ``(n, n)`` or a stack
``(..., n, n)``; the loops run over the matrix dimension only, so a batch of
small matrices costs about as much Python overhead as one matrix.
"""

import numpy as np

__all__ = [
    "as_matrix",
    "as_vector",
    "hermitian_inner",
    "RankDeficientError",
    "lu_det",
    "householder_qr",
    "unitarity_defect",
    "mat_vec",
    "mat_mul",
    "identity",
    "basis_vector",
]


class RankDeficientError(np.linalg.LinAlgError):
    """Raised when a QR pivot vanishes."""


def as_matrix(A, batch=True):
    """Validate and convert to a complex square matrix (or stack of them)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim < 2 or (not batch and A.ndim != 2):
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[-1] != A.shape[-2] or A.shape[-1] == 0:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def as_vector(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"expected a nonempty vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def identity(n):
    return np.eye(n, dtype=complex)


def basis_vector(n, k=0):
    e = np.zeros(n, dtype=complex)
    e[k] = 1.0
    return e


def hermitian_inner(a, b):
    """Hermitian product ``<a, b> = sum(conj(a_i) * b_i)``.

    Conjugate-linear in `a`, linear in `b`.
    """
    a, b = as_vector(a), as_vector(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def mat_vec(A, x):
    A = as_matrix(A, batch=False)
    x = as_vector(x)
    if A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {x.shape}")
    return A @ x


def mat_mul(A, B):
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[-1] != B.shape[-2]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return A @ B


def lu_det(A):
    """Determinant by LU factorization with partial pivoting.

    Parameters
    ----------
    A : array_like, shape (..., n, n)

    Returns
    -------
    det : complex or ndarray of complex
        A singular matrix gives 0 (up to roundoff); no error is raised.
    """
    U = as_matrix(A).copy()
    n = U.shape[-1]
    batch_shape = U.shape[:-2]
    U = U.reshape((-1, n, n))
    m = U.shape[0]
    rows = np.arange(m)
    det = np.ones(m, dtype=complex)
    for k in range(n):
        p = k + np.argmax(np.abs(U[:, k:, k]), axis=1)
        swap = p != k
        if np.any(swap):
            r = rows[swap]
            pk = p[swap]
            tmp = U[r, k, :].copy()
            U[r, k, :] = U[r, pk, :]
            U[r, pk, :] = tmp
            det[swap] = -det[swap]
        pivot = U[:, k, k]
        det *= pivot
        if k == n - 1:
            break
        nonzero = pivot != 0
        safe = np.where(nonzero, pivot, 1.0)
        lower = np.where(nonzero[:, None], U[:, k + 1:, k] / safe[:, None], 0.0)
        U[:, k + 1:, k:] -= lower[:, :, None] * U[:, k, None, k:]
    det = det.reshape(batch_shape)
    return complex(det) if det.ndim == 0 else det


def householder_qr(A, tol=1e-12):
    """QR factorization by complex Householder reflections.

    The phase of each diagonal entry of R is folded into the matching column
    of Q, so ``diag(R)`` is real and strictly positive. Under that
    convention the factorization is unique, and Q is Haar distributed on
    U(n) when A has iid complex Gaussian entries.

    Parameters
    ----------
    A : array_like, shape (..., n, n)
    tol : float
        Relative pivot threshold; ``|R_kk| < tol * max|A|`` raises.

    Returns
    -------
    Q, R : ndarray
        ``A = Q @ R`` with Q unitary and R upper triangular.

    Raises
    ------
    RankDeficientError
        If a pivot falls below the threshold.
    """
    R = as_matrix(A).copy()
    n = R.shape[-1]
    batch_shape = R.shape[:-2]
    R = R.reshape((-1, n, n))
    m = R.shape[0]
    scale = np.maximum(np.abs(R).max(axis=(1, 2)), np.finfo(float).tiny)
    Q = np.broadcast_to(np.eye(n, dtype=complex), (m, n, n)).copy()
    for k in range(n - 1):
        x = R[:, k:, k]
        norm = np.linalg.norm(x, axis=1)
        if np.any(norm < tol * scale):
            raise RankDeficientError("matrix is rank deficient")
        x0 = x[:, 0]
        mod = np.abs(x0)
        phase = np.where(mod > 0, x0 / np.where(mod > 0, mod, 1.0), 1.0)
        v = x.copy()
        v[:, 0] += phase * norm
        vnorm2 = np.sum(np.abs(v) ** 2, axis=1)
        # H = I - 2 v v* / (v* v), applied from the left to R and the right to Q
        beta = (2.0 / vnorm2)[:, None, None]
        col = v[:, :, None]
        R[:, k:, k:] -= (beta * col) @ (col.conj().transpose(0, 2, 1) @ R[:, k:, k:])
        Q[:, :, k:] -= (beta * (Q[:, :, k:] @ col)) @ col.conj().transpose(0, 2, 1)
        R[:, k + 1:, k] = 0.0
    d = np.diagonal(R, axis1=1, axis2=2)
    mod = np.abs(d)
    if np.any(mod < tol * scale[:, None]):
        raise RankDeficientError("matrix is rank deficient")
    ph = d / mod
    Q *= ph[:, None, :]
    R *= ph.conj()[:, :, None]
    idx = np.arange(n)
    R[:, idx, idx] = mod
    return Q.reshape(batch_shape + (n, n)), R.reshape(batch_shape + (n, n))


def unitarity_defect(U):
    """Max-norm of ``U* U - Id`` (per matrix for a stack)."""
    U = as_matrix(U)
    n = U.shape[-1]
    G = np.conj(np.swapaxes(U, -1, -2)) @ U
    d = np.abs(G - np.eye(n)).max(axis=(-2, -1))
    return float(d) if np.ndim(d) == 0 else d
