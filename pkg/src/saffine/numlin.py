"""
Dense small-matrix kernel (n <= ~8).

Matrices are plain numpy arrays of shape ``(..., n, n)``; every routine
broadcasts over leading batch axes so a whole grid of parameter values can
be handled in one call. Columns carry curve-derivative vectors wherever a
matrix is built from a jet: ``M[..., :, k]`` is C^(k+1).

Elimination uses partial (row) pivoting. The singularity threshold is
relative, ``1e-12 * max(1, ||m||_inf ** n)``.
"""

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

SING_RTOL = 1e-12


def as_mat(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionMismatch(f"expected square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_vec(v) -> np.ndarray:
    a = np.array(v, dtype=float)
    if a.ndim < 1:
        raise DimensionMismatch("expected a vector")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite entries")
    return a


def norm_inf(m: np.ndarray) -> np.ndarray:
    """Maximum absolute row sum, batched."""
    return np.abs(m).sum(axis=-1).max(axis=-1)


def sing_threshold(m: np.ndarray) -> np.ndarray:
    n = m.shape[-1]
    return SING_RTOL * np.maximum(1.0, norm_inf(m) ** n)


def _lu(m: np.ndarray):
    """In-place style LU with partial pivoting on a copy.

    Returns (lu, perm, sign) with ``lu`` holding L (unit, strictly lower)
    and U, ``perm[..., i]`` the source row of row i, and ``sign`` the
    permutation parity.
    """
    a = np.array(m, dtype=float, copy=True)
    n = a.shape[-1]
    batch = a.shape[:-2]
    a = a.reshape((-1, n, n))
    nb = a.shape[0]
    perm = np.tile(np.arange(n), (nb, 1))
    sign = np.ones(nb)
    rows = np.arange(nb)
    for k in range(n):
        p = k + np.argmax(np.abs(a[:, k:, k]), axis=1)
        swap = p != k
        if np.any(swap):
            r = rows[swap]
            pk = p[swap]
            tmp = a[r, k, :].copy()
            a[r, k, :] = a[r, pk, :]
            a[r, pk, :] = tmp
            tp = perm[r, k].copy()
            perm[r, k] = perm[r, pk]
            perm[r, pk] = tp
            sign[swap] = -sign[swap]
        piv = a[:, k, k]
        if k + 1 < n:
            with np.errstate(divide="ignore", invalid="ignore"):
                f = np.where(piv[:, None] != 0.0, a[:, k + 1:, k] / piv[:, None], 0.0)
            a[:, k + 1:, k] = f
            a[:, k + 1:, k + 1:] -= f[:, :, None] * a[:, k, None, k + 1:]
    return a.reshape(batch + (n, n)), perm.reshape(batch + (n,)), sign.reshape(batch)


def det(m) -> np.ndarray:
    """Determinant by partially pivoted elimination.

    Returns a float for a single matrix, an array for a batch.
    """
    m = as_mat(m)
    lu, _, sign = _lu(m)
    d = sign * np.prod(np.diagonal(lu, axis1=-2, axis2=-1), axis=-1)
    return float(d) if np.ndim(d) == 0 else d


def _check_singular(m, lu, sign):
    d = sign * np.prod(np.diagonal(lu, axis1=-2, axis2=-1), axis=-1)
    bad = np.abs(d) <= sing_threshold(m)
    if np.any(bad):
        raise SingularMatrix(f"matrix is singular to working precision (|det| = {np.min(np.abs(d)):.3e})")


def _lu_solve(lu, perm, b):
    """Forward/back substitution; ``b`` has shape (..., n, k)."""
    n = lu.shape[-1]
    x = np.take_along_axis(b, perm[..., :, None], axis=-2).copy()
    for i in range(1, n):
        x[..., i, :] -= np.einsum("...j,...jk->...k", lu[..., i, :i], x[..., :i, :])
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[..., i, :] -= np.einsum("...j,...jk->...k", lu[..., i, i + 1:], x[..., i + 1:, :])
        x[..., i, :] /= lu[..., i, i, None]
    return x


def solve(m, b) -> np.ndarray:
    """Solve ``m @ x = b``.

    ``b`` is either a vector (shape ``(..., n)``) or a matrix whose columns
    are right-hand sides (shape ``(..., n, k)``, same ndim as ``m``).
    """
    m = as_mat(m)
    b = as_vec(b)
    n = m.shape[-1]
    vec_rhs = b.ndim < m.ndim
    rhs = b[..., None] if vec_rhs else b
    if rhs.shape[-2] != n:
        raise DimensionMismatch(f"rhs shape {b.shape} does not match matrix {m.shape}")
    batch = np.broadcast_shapes(m.shape[:-2], rhs.shape[:-2])
    m = np.broadcast_to(m, batch + (n, n))
    rhs = np.broadcast_to(rhs, batch + rhs.shape[-2:])
    lu, perm, sign = _lu(m)
    _check_singular(m, lu, sign)
    x = _lu_solve(lu, perm, rhs)
    return x[..., 0] if vec_rhs else x


def inv(m) -> np.ndarray:
    m = as_mat(m)
    n = m.shape[-1]
    eye = np.broadcast_to(np.eye(n), m.shape)
    return solve(m, eye)


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-2 if b.ndim > 1 else -1]:
        raise DimensionMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b
