"""Dense floating-point linear algebra used by the Cartan projection.

Everything here works on small square ``numpy`` arrays (n <= 32).  The
symmetric eigensolver is a cyclic Jacobi iteration; it is slow compared to
LAPACK but simple, accurate at these sizes, and deterministic.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ContractViolation, NumericFailure, SingularInput

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 100
SINGULAR_DET = 1e-14


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Return ``a`` as a finite float64 2-d array, checking the basic contract."""
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ContractViolation(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has NaN or infinite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {m.shape}")
    return m


def sym_eigen(a, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, vectors)`` with eigenvalues in nonincreasing order
    and the matching orthonormal eigenvectors as the columns of ``vectors``.

    Sweeps stop once the off-diagonal Frobenius norm is at most
    ``tol * ||A||_F``.  A relative threshold is used because Gram matrices of
    long group words have entries far beyond 1, where an absolute 1e-12 is
    below the floating-point resolution.
    """
    if not tol > 0:
        raise ContractViolation("tol must be positive")
    m = as_matrix(a, square=True)
    n = m.shape[0]
    scale = float(np.linalg.norm(m))
    if np.max(np.abs(m - m.T), initial=0.0) > tol * max(1.0, scale):
        raise ContractViolation("matrix is not symmetric within tolerance")
    m = 0.5 * (m + m.T)
    v = np.eye(n)
    if scale == 0.0 or n == 1:
        return np.diag(m).copy(), v

    for _ in range(max_sweeps):
        off = float(np.linalg.norm(m - np.diag(np.diag(m))))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                diff = m[q, q] - m[p, p]
                if apq == 0.0:
                    continue
                if abs(apq) < 1e-18 * abs(diff):
                    # rotation angle below rounding; avoid overflow in theta**2
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = m[:, p].copy()
                col_q = m[:, q].copy()
                m[:, p] = c * col_p - s * col_q
                m[:, q] = s * col_p + c * col_q
                row_p = m[p, :].copy()
                row_q = m[q, :].copy()
                m[p, :] = c * row_p - s * row_q
                m[q, :] = s * row_p + c * row_q
                m[p, q] = m[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NumericFailure(f"Jacobi iteration did not converge within the cap of {max_sweeps} sweeps")

    w = np.diag(m).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def sym_eigvals_batch(a, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues (descending) of a stack of symmetric matrices, shape ``(k, n, n)``.

    The same cyclic Jacobi sweep as :func:`sym_eigen`, with every rotation
    applied to the whole stack at once; each matrix gets its own angle.
    """
    m = np.array(a, dtype=float)
    if m.ndim != 3 or m.shape[1] != m.shape[2]:
        raise ContractViolation(f"expected a stack of square matrices, got shape {m.shape}")
    k, n, _ = m.shape
    if k == 0:
        return np.zeros((0, n))
    m = 0.5 * (m + np.swapaxes(m, 1, 2))
    scale = np.linalg.norm(m, axis=(1, 2))
    idx = np.arange(n)
    for _ in range(max_sweeps):
        off = m.copy()
        off[:, idx, idx] = 0.0
        if np.all(np.linalg.norm(off, axis=(1, 2)) <= tol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[:, p, q]
                diff = m[:, q, q] - m[:, p, p]
                tiny = np.abs(apq) < 1e-18 * np.abs(diff)
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    theta = np.where(apq != 0.0, diff / (2.0 * np.where(apq != 0.0, apq, 1.0)), 0.0)
                    sgn = np.where(theta >= 0.0, 1.0, -1.0)
                    t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                    t = np.where(tiny, apq / np.where(diff != 0.0, diff, 1.0), t)
                t = np.where(apq == 0.0, 0.0, t)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = m[:, :, p].copy()
                col_q = m[:, :, q].copy()
                m[:, :, p] = c[:, None] * col_p - s[:, None] * col_q
                m[:, :, q] = s[:, None] * col_p + c[:, None] * col_q
                row_p = m[:, p, :].copy()
                row_q = m[:, q, :].copy()
                m[:, p, :] = c[:, None] * row_p - s[:, None] * row_q
                m[:, q, :] = s[:, None] * row_p + c[:, None] * row_q
                m[:, p, q] = m[:, q, p] = 0.0
    else:
        raise NumericFailure(f"Jacobi iteration did not converge within the cap of {max_sweeps} sweeps")
    w = m[:, idx, idx]
    return -np.sort(-w, axis=1)


def gram(g) -> np.ndarray:
    """``g^T g`` for an invertible square matrix ``g``."""
    m = as_matrix(g, square=True)
    if abs(np.linalg.det(m)) <= SINGULAR_DET:
        raise SingularInput("matrix is singular (|det| <= 1e-14)")
    out = m.T @ m
    return 0.5 * (out + out.T)


def block_diag(*blocks) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def nullspace(a, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return np.eye(a.shape[1])
    _, s, vt = np.linalg.svd(a)
    cutoff = rtol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vt[rank:].T.copy()
