"""Dense linear algebra: Gauss-Jordan elimination, null-space bases, and
minimum-norm least squares."""
from dataclasses import dataclass

import numpy as np

from ._kernels import gauss_jordan_kernel
from .errors import DimensionMismatch, NonFiniteInput, RankDeficient

EPS = np.finfo(float).eps


def as_matrix(M, name="matrix"):
    """Validate and return ``M`` as a finite 2-D float array."""
    M = np.array(M, dtype=float)
    if M.ndim == 1 and M.size == 0:
        M = M.reshape(0, 0)
    if M.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return M


def as_vector(v, name="vector"):
    v = np.array(v, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return v


def default_pivot_tol(shape):
    """Relative pivot threshold ``max(m, n) * eps``."""
    return max(shape) * EPS


def null_tolerance(A):
    """Allowed ``max|A K^T|``: ``1e-10 * max|A| * n``."""
    A = np.asarray(A)
    if A.size == 0:
        return 1e-10
    return 1e-10 * float(np.max(np.abs(A))) * A.shape[1]


@dataclass(frozen=True)
class EliminationResult:
    reduced: np.ndarray
    pivot_columns: tuple
    rank: int
    column_permutation: np.ndarray
    transform: np.ndarray  # row operations: transform @ M == reduced


@dataclass(frozen=True)
class NullSpaceBasis:
    K: np.ndarray
    nullity: int
    source_permutation: np.ndarray

    @property
    def is_trivial(self):
        """True when the null space is {0} (``K`` is ``0 x n``)."""
        return self.nullity == 0


def gauss_jordan(M, pivot_tol=None):
    """Reduce ``M`` to reduced row echelon form.

    Pivots are chosen by largest magnitude within the current column; a
    column whose candidates all fall below ``pivot_tol * max|M|`` is treated
    as dependent and moved behind the pivot columns in
    ``column_permutation``, so that ``reduced[:, column_permutation]`` reads
    ``[[I_r, N], [0, 0]]``.
    """
    M = as_matrix(M)
    if M.size == 0:
        raise DimensionMismatch("gauss_jordan needs a nonempty matrix")
    if pivot_tol is None:
        pivot_tol = default_pivot_tol(M.shape)
    if not pivot_tol > 0:
        raise ValueError("pivot_tol must be positive")
    scale = float(np.max(np.abs(M)))
    R, T, pivots, rank = gauss_jordan_kernel(M, pivot_tol * scale)
    pivots = tuple(int(p) for p in pivots)
    rest = [j for j in range(M.shape[1]) if j not in set(pivots)]
    perm = np.array(list(pivots) + rest, dtype=np.int64)
    return EliminationResult(R, pivots, int(rank), perm, T)


def matrix_rank(M, pivot_tol=None):
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return gauss_jordan(M, pivot_tol).rank


def null_space_basis(A, pivot_tol=None):
    """Rows spanning ``{x : A x = 0}`` for a full-row-rank ``A``.

    In the permuted column order the basis is ``[-N^T | I]`` where the
    reduced ``A`` reads ``[I | N]``; the returned ``K`` is in the original
    column order.
    """
    A = as_matrix(A, "A")
    m, n = A.shape
    er = gauss_jordan(A, pivot_tol)
    if er.rank < m:
        raise RankDeficient(er.rank, m)
    nu = n - m
    perm = er.column_permutation
    if nu == 0:
        return NullSpaceBasis(np.zeros((0, n)), 0, perm)
    N = er.reduced[:m, perm[m:]]
    K_perm = np.hstack([-N.T, np.eye(nu)])
    K = np.empty_like(K_perm)
    K[:, perm] = K_perm
    return NullSpaceBasis(K, nu, perm)


def least_squares_apply(M, rhs, rcond=None):
    """Minimum-norm least-squares solution ``M^+ rhs`` via the SVD."""
    M = as_matrix(M)
    rhs = as_vector(rhs, "rhs")
    if rhs.shape[0] != M.shape[0]:
        raise DimensionMismatch(f"rhs has length {rhs.shape[0]}, matrix has {M.shape[0]} rows")
    if M.shape[1] == 0:
        return np.zeros(0)
    if M.shape[0] == 0:
        return np.zeros(M.shape[1])
    return np.linalg.lstsq(M, rhs, rcond=rcond)[0]
