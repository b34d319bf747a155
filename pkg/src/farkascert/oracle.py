"""Brute-force ground truth for small instances.

Everything here is exhaustive enumeration over column subsets, solved with
batched SVD pseudo-inverses.  It never calls the residual solvers.
"""
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BudgetExceeded
from .linalg_core import default_pivot_tol, matrix_rank

MAX_N = 14
MAX_M_WITNESS = 8
MAX_BASES = 4000


@dataclass(frozen=True)
class OracleVerdict:
    feasible: bool
    min_norm_point: Optional[np.ndarray]
    basic_feasible_points: list = field(default_factory=list)
    min_norm_II_witness: Optional[np.ndarray] = None


def _accept_tol(scale):
    return 1e-9 * (1.0 + scale)


def _pick_min(cands):
    """Smallest norm; ties broken lexicographically."""
    if not cands:
        return None
    norms = np.array([np.linalg.norm(c) for c in cands])
    best = norms.min()
    tied = [c for c, v in zip(cands, norms) if v <= best * (1 + 1e-12) + 1e-300]
    return min(tied, key=lambda c: tuple(c))


def basic_feasible_points(A, b):
    """All distinct basic feasible solutions of ``A x = b, x >= 0``."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    r = matrix_rank(A) if A.size else 0
    if r == 0:
        return []
    if math.comb(n, r) > MAX_BASES or n > MAX_N:
        raise BudgetExceeded(f"C({n},{r}) bases exceed the enumeration budget")
    subsets = np.array(list(itertools.combinations(range(n), r)), dtype=np.int64)
    blocks = A[:, subsets].transpose(1, 0, 2)  # (count, m, r)
    sv = np.linalg.svd(blocks, compute_uv=False)
    scale = float(np.max(np.abs(A)))
    nonsingular = sv[:, -1] > default_pivot_tol(A.shape) * scale
    sols = np.einsum("kij,j->ki", np.linalg.pinv(blocks), b)
    resid = np.linalg.norm(np.einsum("kij,kj->ki", blocks, sols) - b, axis=1)
    points = []
    seen = set()
    for k in np.flatnonzero(nonsingular):
        xs = sols[k]
        mag = float(np.max(np.abs(xs)))
        if resid[k] > _accept_tol(np.linalg.norm(b)) or xs.min() < -_accept_tol(mag):
            continue
        x = np.zeros(n)
        x[subsets[k]] = np.maximum(xs, 0.0)
        key = tuple(np.round(x, 9))
        if key not in seen:
            seen.add(key)
            points.append(x)
    return points


def min_norm_point(A, b):
    """Minimum-norm point of ``A x = b, x >= 0`` by enumerating supports.

    For every support pattern the minimum-norm solution restricted to that
    support is computed; nonnegative exact solutions are candidates.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if n > MAX_N:
        raise BudgetExceeded(f"2^{n} support patterns exceed the enumeration budget")
    masks = ((np.arange(1, 2 ** n)[:, None] >> np.arange(n)) & 1).astype(float)
    blocks = A[None, :, :] * masks[:, None, :]
    xs = np.einsum("kij,j->ki", np.linalg.pinv(blocks), b)
    resid = np.linalg.norm(xs @ A.T - b, axis=1)
    mags = np.max(np.abs(xs), axis=1)
    ok = (resid <= _accept_tol(np.linalg.norm(b))) & (xs.min(axis=1) >= -_accept_tol(mags))
    return _pick_min([np.maximum(x, 0.0) for x in xs[ok]])


def min_norm_II_witness(A, b, rho=1.0):
    """Minimum-norm ``u`` with ``A^T u <= 0, b^T u = rho``, or ``None``.

    Enumerates candidate active sets S of at most ``m - 1`` columns and
    projects the origin onto ``{u : A_S^T u = 0, b^T u = rho}``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if m > MAX_M_WITNESS:
        raise BudgetExceeded(f"m={m} exceeds the witness enumeration budget")
    cands = []
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    for k in range(0, min(n, m - 1) + 1):
        subsets = np.array(list(itertools.combinations(range(n), k)), dtype=np.int64)
        subsets = subsets.reshape(len(subsets), k)
        C = np.concatenate([A[:, subsets].transpose(1, 2, 0),
                            np.broadcast_to(b, (len(subsets), 1, m))], axis=1)  # (count, k+1, m)
        rhs = np.zeros(k + 1)
        rhs[-1] = rho
        us = np.einsum("kij,j->ki", np.linalg.pinv(C), rhs)
        resid = np.abs(np.einsum("kij,kj->ki", C, us) - rhs).max(axis=1)
        worst = (us @ A).max(axis=1) if n else np.full(len(us), -np.inf)
        norms = np.linalg.norm(us, axis=1)
        ok = (resid <= _accept_tol(rho)) & (worst <= _accept_tol(scale * norms))
        cands.extend(us[ok])
    return _pick_min(cands)


def enumerate_feasibility(problem, with_min_norm=True, with_witness=True):
    """Exhaustive verdict on ``A x = b, x >= 0`` and its alternative."""
    A, b = problem.A, problem.b
    if A.shape[1] > MAX_N:
        raise BudgetExceeded(f"n={A.shape[1]} exceeds the enumeration budget")
    bfs = basic_feasible_points(A, b)
    feasible = bool(bfs)
    x_min = min_norm_point(A, b) if (feasible and with_min_norm) else None
    u_min = None
    if with_witness and not feasible:
        u_min = min_norm_II_witness(A, b, problem.rho)
    return OracleVerdict(feasible, x_min, bfs, u_min)
