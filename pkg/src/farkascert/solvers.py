"""Residual minimisers for the two alternative systems and the reduced system.

* ``solve_primal_residual``: min 0.5*||b - A x||^2 over x >= 0
* ``solve_dual_residual``:   min 0.5*(||(A^T u)_+||^2 + (rho - b^T u)^2) over u
* ``solve_reduced_residual``: min 0.5*||(K^T y - x_bar)_+||^2 over y
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, ZeroRhs
from .linalg_core import as_matrix, as_vector

log = logging.getLogger(__name__)

NEWTON_DELTA = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    grad_tol: float = 1e-10
    max_iter: int = 10_000
    feas_tol: float = 1e-9
    armijo_beta: float = 0.5
    armijo_sigma: float = 1e-4

    def __post_init__(self):
        if not (self.grad_tol > 0 and self.feas_tol > 0):
            raise ValueError("grad_tol and feas_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not (0 < self.armijo_beta < 1 and 0 < self.armijo_sigma < 1):
            raise ValueError("Armijo parameters must lie in (0, 1)")


@dataclass(frozen=True)
class SolverReport:
    iterations: int
    objective: float
    grad_norm: float
    converged: bool
    active_set: tuple
    history: np.ndarray = field(repr=False, compare=False)
    solver: str = ""


def _check_b(b):
    if not np.linalg.norm(b) > 0:
        raise ZeroRhs("right-hand side b must be nonzero")


def _report(name, it, f, gn, converged, hist, active):
    if not converged:
        log.warning("%s stopped without convergence: %d iterations, grad norm %.3e", name, it, gn)
    else:
        log.debug("%s converged in %d iterations (objective %.6e)", name, it, f)
    return SolverReport(int(it), float(f), float(gn), bool(converged),
                        tuple(int(j) for j in active), hist, name)


# objectives and gradients (public so they can be checked independently)

def primal_objective(A, b, x):
    return float(_kernels.nnls_value(np.asarray(A, float), np.asarray(b, float), np.asarray(x, float)))


def primal_gradient(A, b, x):
    return _kernels.nnls_gradient(np.asarray(A, float), np.asarray(b, float), np.asarray(x, float))


def _dual_parts(A, b, rho):
    A = np.asarray(A, float)
    m, n = A.shape
    return A, np.zeros(n), np.asarray(b, float).reshape(m, 1), np.array([float(rho)])


def dual_objective(A, b, rho, u):
    P, c, Q, d = _dual_parts(A, b, rho)
    return float(_kernels.pwq_value(P, c, Q, d, np.asarray(u, float)))


def dual_gradient(A, b, rho, u):
    P, c, Q, d = _dual_parts(A, b, rho)
    return _kernels.pwq_gradient(P, c, Q, d, np.asarray(u, float))


def _reduced_parts(K, x_bar):
    K = np.asarray(K, float)
    return K, np.asarray(x_bar, float), np.zeros((K.shape[0], 0)), np.zeros(0)


def reduced_objective(K, x_bar, y):
    P, c, Q, d = _reduced_parts(K, x_bar)
    return float(_kernels.pwq_value(P, c, Q, d, np.asarray(y, float)))


def reduced_gradient(K, x_bar, y):
    P, c, Q, d = _reduced_parts(K, x_bar)
    return _kernels.pwq_gradient(P, c, Q, d, np.asarray(y, float))


# solvers

def solve_primal_residual(A, b, cfg=None, x0=None):
    """Minimise ``0.5*||b - A x||^2`` over the nonnegative orthant.

    Starts from ``x0`` (default zero).  The report's ``active_set`` lists the
    components held at the bound.  A run that exhausts ``max_iter`` returns
    its best iterate with ``converged=False``.
    """
    cfg = cfg or SolverConfig()
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    m, n = A.shape
    if b.shape[0] != m:
        raise DimensionMismatch(f"b has length {b.shape[0]}, A has {m} rows")
    _check_b(b)
    x0 = np.zeros(n) if x0 is None else as_vector(x0, "x0")
    x, it, f, gn, conv, hist = _kernels.nnls_kernel(
        A, b, x0, cfg.grad_tol, cfg.max_iter, cfg.armijo_beta, cfg.armijo_sigma)
    active = np.flatnonzero(x <= 0.0)
    return x, _report("primal_residual", it, f, gn, conv, hist, active)


def solve_dual_residual(A, b, rho, cfg=None, u0=None):
    """Minimise ``0.5*(||(A^T u)_+||^2 + (rho - b^T u)^2)`` over ``u``.

    The report's ``active_set`` is ``{j : (A^T u)_j > 0}``.
    """
    cfg = cfg or SolverConfig()
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    m, n = A.shape
    if b.shape[0] != m:
        raise DimensionMismatch(f"b has length {b.shape[0]}, A has {m} rows")
    if not rho > 0:
        raise ValueError("rho must be positive")
    _check_b(b)
    u0 = np.zeros(m) if u0 is None else as_vector(u0, "u0")
    P, c, Q, d = _dual_parts(A, b, rho)
    u, it, f, gn, conv, hist = _kernels.pwq_newton_kernel(
        P, c, Q, d, u0, cfg.grad_tol, cfg.max_iter, cfg.armijo_beta,
        cfg.armijo_sigma, NEWTON_DELTA)
    active = np.flatnonzero(A.T @ u > 0.0)
    return u, _report("dual_residual", it, f, gn, conv, hist, active)


def solve_reduced_residual(K, x_bar, cfg=None, y0=None):
    """Minimise ``0.5*||(K^T y - x_bar)_+||^2``; zero exactly when
    ``K^T y <= x_bar`` is solvable.

    A ``0 x n`` basis gives an empty ``y`` and the objective
    ``0.5*||(-x_bar)_+||^2``.
    """
    cfg = cfg or SolverConfig()
    x_bar = as_vector(x_bar, "x_bar")
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[1] != x_bar.shape[0]:
        raise DimensionMismatch(f"K of shape {K.shape} does not match x_bar of length {x_bar.shape[0]}")
    nu = K.shape[0]
    if nu == 0:
        viol = np.maximum(-x_bar, 0.0)
        f = 0.5 * float(viol @ viol)
        return np.zeros(0), _report("reduced_residual", 0, f, 0.0, True,
                                    np.array([f]), np.flatnonzero(-x_bar > 0))
    K = as_matrix(K, "K")
    y0 = np.zeros(nu) if y0 is None else as_vector(y0, "y0")
    P, c, Q, d = _reduced_parts(K, x_bar)
    y, it, f, gn, conv, hist = _kernels.pwq_newton_kernel(
        P, c, Q, d, y0, cfg.grad_tol, cfg.max_iter, cfg.armijo_beta,
        cfg.armijo_sigma, NEWTON_DELTA)
    active = np.flatnonzero(K.T @ y - x_bar > 0.0)
    return y, _report("reduced_residual", it, f, gn, conv, hist, active)
