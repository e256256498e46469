"""Dense real linear-algebra kernels used by the estimators.

Matrices are plain 2-D ``float64`` numpy arrays and vectors are 1-D arrays.
A support set is a sorted 1-D integer array of column indices.
"""

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    OverdeterminedSupportError,
    ShapeError,
    SingularSupportError,
    SingularSystemError,
)

RANK_TOL = 1e-10


def as_matrix(A):
    """Return ``A`` as a finite 2-D float array (accepts a TrainingMatrix)."""
    A = getattr(A, "matrix", A)
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


def as_vector(v):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ShapeError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite entries")
    return v


def as_support(omega, n):
    """Validate a support set against ambient dimension ``n``."""
    idx = np.asarray(omega, dtype=np.intp).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ShapeError(f"support indices must lie in [0, {n})")
    out = np.unique(idx)
    if out.size != idx.size:
        raise ValueError("support set contains duplicate indices")
    return out


def matvec(A, v):
    """Product ``A @ v``."""
    A = as_matrix(A)
    v = as_vector(v)
    if v.shape[0] != A.shape[1]:
        raise ShapeError(f"vector of length {v.shape[0]} does not match {A.shape[1]} columns")
    return A @ v


def transpose_matvec(A, v):
    """Product ``A.T @ v``, the correlation proxy of greedy pursuits."""
    A = as_matrix(A)
    v = as_vector(v)
    if v.shape[0] != A.shape[0]:
        raise ShapeError(f"vector of length {v.shape[0]} does not match {A.shape[0]} rows")
    return A.T @ v


def top_k_indices(v, k):
    """Indices of the ``k`` largest-magnitude entries of ``v``, sorted ascending.

    Ties are resolved in favour of the lower index.
    """
    v = as_vector(v)
    k = int(k)
    if k < 0 or k > v.shape[0]:
        raise ValueError(f"k={k} outside [0, {v.shape[0]}]")
    return _top_k(v, k)


def _top_k(v, k):
    # stable sort keeps lower indices first among equal magnitudes
    return np.sort(np.argsort(-np.abs(v), kind="stable")[:k])


def restricted_least_squares(A, omega, y):
    """Least squares on the columns ``omega`` of ``A``.

    Solves ``min ||y - A[:, omega] u||_2`` with a thin QR factorisation of the
    column submatrix and scatters ``u`` into a length ``A.shape[1]`` vector
    that is exactly zero off ``omega``.

    Raises
    ------
    OverdeterminedSupportError
        If ``len(omega) > A.shape[0]``.
    SingularSupportError
        If ``min |R_ii| < 1e-10 * max |R_ii|``.
    """
    A = as_matrix(A)
    y = as_vector(y)
    if y.shape[0] != A.shape[0]:
        raise ShapeError(f"observation of length {y.shape[0]} does not match {A.shape[0]} rows")
    return _restricted_lstsq(A, as_support(omega, A.shape[1]), y)


def _restricted_lstsq(A, omega, y):
    # unchecked kernel: omega is a sorted, duplicate-free index array
    out = np.zeros(A.shape[1])
    if omega.size == 0:
        return out
    if omega.size > A.shape[0]:
        raise OverdeterminedSupportError(omega.size, A.shape[0])
    Q, R = np.linalg.qr(A[:, omega], mode="reduced")
    diag = np.abs(np.diag(R))
    top = diag.max()
    ratio = diag.min() / top if top > 0 else 0.0
    if ratio < RANK_TOL:
        raise SingularSupportError(omega, ratio)
    out[omega] = solve_triangular(R, Q.T @ y, lower=False, check_finite=False)
    return out


def min_norm_least_squares(A, y):
    """Minimum-norm solution ``A.T (A A.T)^{-1} y`` of an underdetermined system.

    Computed from the QR factorisation ``A.T = Q R`` as ``Q R^{-T} y``.
    """
    A = as_matrix(A)
    y = as_vector(y)
    m, n = A.shape
    if y.shape[0] != m:
        raise ShapeError(f"observation of length {y.shape[0]} does not match {m} rows")
    if m > n:
        raise ShapeError(f"min-norm least squares needs rows <= cols, got {A.shape}")
    Q, R = np.linalg.qr(A.T, mode="reduced")
    diag = np.abs(np.diag(R))
    top = diag.max() if diag.size else 0.0
    if top == 0 or diag.min() < RANK_TOL * top:
        raise SingularSystemError("A A^T is singular: rows of A are numerically dependent")
    w = solve_triangular(R, y, trans="T", lower=False)
    return Q @ w
