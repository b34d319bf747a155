"""Null-space reduction of ``A x = b, x >= 0`` (A of full row rank).

Writing ``x = x_bar - K^T y`` with ``x_bar = A^+ b`` and the rows of ``K``
spanning the null space of ``A`` turns the system into ``K^T y <= x_bar``
in ``nu = n - m`` variables.  Its alternative is ``K v = 0, -x_bar^T v = rho,
v >= 0``, linked to ``A^T u <= 0, b^T u = rho`` through ``v = -A^T u``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .alternatives import VERIFY_TOL, Feasible, Route, decide
from .errors import (DiagramViolation, DimensionMismatch, FarkasError,
                     MaxIterExceeded, NotInRange, NotInSolutionSet)
from .linalg_core import (NullSpaceBasis, as_vector, least_squares_apply,
                          null_space_basis, null_tolerance)
from .solvers import SolverConfig, solve_reduced_residual

MAP_TOL = 1e-9


@dataclass(frozen=True)
class ReducedSystems:
    basis: NullSpaceBasis
    x_bar: np.ndarray
    nu: int
    rho: float
    A: np.ndarray
    b: np.ndarray

    @property
    def K(self):
        return self.basis.K


@dataclass(frozen=True)
class DiagramReport:
    I: bool
    I_y: bool
    II: bool
    II_v: bool
    x: Optional[np.ndarray]
    y: Optional[np.ndarray]
    u: Optional[np.ndarray]
    v: Optional[np.ndarray]
    reduced_objective: float


def build_reduction(problem):
    A, b = problem.A, problem.b
    basis = null_space_basis(A)
    x_bar = least_squares_apply(A, b)
    scale = 1.0 + float(np.max(np.abs(b)))
    if np.max(np.abs(A @ x_bar - b)) > MAP_TOL * scale:
        raise FarkasError("particular solution does not solve A x = b")
    if basis.nullity and np.max(np.abs(A @ basis.K.T)) > null_tolerance(A):
        raise FarkasError("null-space basis fails A K^T = 0")
    return ReducedSystems(basis, x_bar, basis.nullity, problem.rho, A, b)


def map_y_to_x(red, y):
    y = as_vector(y, "y") if red.nu else np.zeros(0)
    if y.shape[0] != red.nu:
        raise DimensionMismatch(f"y has length {y.shape[0]}, expected {red.nu}")
    return red.x_bar - red.K.T @ y


def map_x_to_y(red, x, tol=MAP_TOL):
    """Inverse of ``map_y_to_x`` on the solution set of ``A x = b``."""
    x = as_vector(x, "x")
    if x.shape[0] != red.x_bar.shape[0]:
        raise DimensionMismatch(f"x has length {x.shape[0]}, expected {red.x_bar.shape[0]}")
    err = float(np.max(np.abs(red.A @ x - red.b)))
    if err > tol * (1.0 + float(np.max(np.abs(red.b)))):
        raise NotInSolutionSet(f"|A x - b| = {err:.3e}; x does not solve A x = b")
    if red.nu == 0:
        return np.zeros(0)
    return least_squares_apply(red.K.T, red.x_bar - x)


def map_u_to_v(problem, u):
    u = as_vector(u, "u")
    if u.shape[0] != problem.A.shape[0]:
        raise DimensionMismatch(f"u has length {u.shape[0]}, expected {problem.A.shape[0]}")
    return -(problem.A.T @ u)


def map_v_to_u(problem, v, tol=MAP_TOL):
    """``u = -(A^T)^+ v``; ``v`` must lie in the range of ``A^T``."""
    v = as_vector(v, "v")
    if v.shape[0] != problem.A.shape[1]:
        raise DimensionMismatch(f"v has length {v.shape[0]}, expected {problem.A.shape[1]}")
    u = -least_squares_apply(problem.A.T, v)
    err = float(np.max(np.abs(-(problem.A.T @ u) - v), initial=0.0))
    if err > tol * (1.0 + float(np.max(np.abs(v), initial=0.0))):
        raise NotInRange(f"v is not in the range of A^T (round-trip error {err:.3e})")
    return u


def _transport(problem, red, u, tol):
    """Map ``u`` to ``v``, normalise ``-x_bar^T v = rho``, and test it."""
    v = map_u_to_v(problem, u)
    level = -float(red.x_bar @ v)
    if not level > 0:
        return v, False
    v = v * (red.rho / level)
    ok = float(v.min(initial=0.0)) >= -tol
    if red.nu:
        ok = ok and float(np.max(np.abs(red.K @ v))) <= tol * (1.0 + float(np.max(np.abs(v))))
    return v, ok


def check_diagram(problem, cfg=None, tol=VERIFY_TOL):
    """Decide all four systems and check the equivalences and alternatives.

    Raises ``DiagramViolation`` naming the first broken edge.
    """
    cfg = cfg or SolverConfig()
    red = build_reduction(problem)
    cert, _, reports = decide(problem, cfg, Route.BOTH)
    dual_rep = reports[1]
    cons_I = isinstance(cert, Feasible)
    cons_II = dual_rep.objective <= cfg.feas_tol * problem.rho ** 2

    if red.nu == 0:
        y = np.zeros(0)
        viol = np.maximum(-red.x_bar, 0.0)
        h = 0.5 * float(viol @ viol)
        cons_Iy = bool(np.all(red.x_bar >= -tol))
    else:
        y, rep = solve_reduced_residual(red.K, red.x_bar, cfg)
        if not rep.converged:
            raise MaxIterExceeded("reduced residual solver did not converge", rep)
        h = rep.objective
        cons_Iy = h <= cfg.feas_tol * max(1.0, float(red.x_bar @ red.x_bar))
    x = map_y_to_x(red, y)

    u = cert.u_cert if not cons_I else cert.u_star
    v, cons_IIv = _transport(problem, red, u, tol)

    if cons_I != cons_Iy:
        raise DiagramViolation("I<=>I_y", f"I={cons_I}, I_y={cons_Iy}, h={h:.3e}")
    if cons_II != cons_IIv:
        raise DiagramViolation("II<=>II_v", f"II={cons_II}, II_v={cons_IIv}")
    if cons_I == cons_II:
        raise DiagramViolation("I xor II", f"I={cons_I}, II={cons_II}")
    return DiagramReport(cons_I, cons_Iy, cons_II, cons_IIv, x, y, u, v, h)
