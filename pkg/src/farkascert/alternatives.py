"""Certification of ``A x = b, x >= 0`` against its alternative
``A^T u <= 0, b^T u = rho``.

Exactly one of the two systems is consistent.  ``decide`` finds out which by
minimising residuals and returns the matching certificate: the
minimum-norm solution of the first system, or the minimum-norm solution of
the second (a Farkas certificate).
"""
import enum
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import (CertificateInvalid, DimensionMismatch, InconsistentRoutes,
                     MaxIterExceeded, ZeroResidual, ZeroRhs)
from .linalg_core import as_matrix, as_vector
from .solvers import SolverConfig, solve_dual_residual, solve_primal_residual

W2_THRESHOLD = 1e-7
VERIFY_TOL = 1e-7


class Route(str, enum.Enum):
    PRIMAL = "primal"
    DUAL = "dual"
    BOTH = "both"


@dataclass(frozen=True)
class FeasibilityProblem:
    A: np.ndarray
    b: np.ndarray
    rho: float = 1.0

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        b = as_vector(self.b, "b")
        if b.shape[0] != A.shape[0]:
            raise DimensionMismatch(f"b has length {b.shape[0]}, A has {A.shape[0]} rows")
        if not np.linalg.norm(b) > 0:
            raise ZeroRhs("right-hand side b must be nonzero")
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise ValueError("rho must be a positive finite number")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def shape(self):
        return self.A.shape

    def with_rho(self, rho):
        return FeasibilityProblem(self.A, self.b, rho)


@dataclass(frozen=True, kw_only=True)
class _Witnesses:
    # primal residual minimiser and its residual z = b - A x
    x_star: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None
    # dual residual minimiser with w1 = (A^T u)_+ and w2 = rho - b^T u
    u_star: Optional[np.ndarray] = None
    w1: Optional[np.ndarray] = None
    w2: Optional[float] = None
    route: str = Route.BOTH.value


@dataclass(frozen=True, kw_only=True)
class Feasible(_Witnesses):
    x_normal: np.ndarray
    normality_guaranteed: bool = True
    status = "feasible"


@dataclass(frozen=True, kw_only=True)
class Infeasible(_Witnesses):
    u_cert: np.ndarray
    status = "infeasible"


Certificate = Union[Feasible, Infeasible]


@dataclass(frozen=True)
class DualIdentityReport:
    """Residuals of ``||z||^2 = b^T z`` and ``||w1||^2 + w2^2 = rho*w2``.

    ``None`` marks an identity whose witness was not computed on the route
    taken.
    """
    z_identity_residual: Optional[float]
    w_identity_residual: Optional[float]


@dataclass(frozen=True)
class Decision:
    certificate: Certificate
    identities: DualIdentityReport
    reports: tuple = field(default=())

    def __iter__(self):
        return iter((self.certificate, self.identities, self.reports))


def _primal_witness(problem, x_star):
    z = problem.b - problem.A @ x_star
    return z


def _dual_witness(problem, u_star):
    w1 = np.maximum(problem.A.T @ u_star, 0.0)
    w2 = float(problem.rho - problem.b @ u_star)
    return w1, w2


def identity_residuals(problem, x_star=None, u_star=None):
    z_res = w_res = None
    if x_star is not None:
        z = _primal_witness(problem, x_star)
        z_res = float(abs(z @ z - problem.b @ z))
    if u_star is not None:
        w1, w2 = _dual_witness(problem, u_star)
        w_res = float(abs(w1 @ w1 + w2 * w2 - problem.rho * w2))
    return DualIdentityReport(z_res, w_res)


def primal_is_feasible(problem, objective, cfg):
    return objective <= cfg.feas_tol * max(1.0, float(problem.b @ problem.b))


def normal_solution_of_II(problem, x_star, feas_tol=None):
    """``rho * z / ||z||^2`` with ``z = b - A x_star``.

    When ``x_star`` minimises the primal residual this is the minimum-norm
    vector satisfying ``A^T u <= 0, b^T u = rho``.
    """
    feas_tol = SolverConfig().feas_tol if feas_tol is None else feas_tol
    x_star = as_vector(x_star, "x_star")
    z = problem.b - problem.A @ x_star
    nz = float(np.linalg.norm(z))
    if nz <= feas_tol:
        raise ZeroResidual(f"residual norm {nz:.3e} is zero; the system is feasible")
    return problem.rho * z / (nz * nz)


def _require_converged(report):
    if not report.converged:
        raise MaxIterExceeded(
            f"{report.solver} did not converge: {report.iterations} iterations, "
            f"grad norm {report.grad_norm:.3e}", report)


def _run_primal(problem, cfg):
    x_star, rep = solve_primal_residual(problem.A, problem.b, cfg)
    _require_converged(rep)
    return x_star, rep, primal_is_feasible(problem, rep.objective, cfg)


def _run_dual(problem, cfg, w2_threshold):
    u_star, rep = solve_dual_residual(problem.A, problem.b, problem.rho, cfg)
    _require_converged(rep)
    _, w2 = _dual_witness(problem, u_star)
    return u_star, rep, w2 > w2_threshold * problem.rho


def _feasible_from_dual(problem, u_star, route, **extra):
    w1, w2 = _dual_witness(problem, u_star)
    return Feasible(x_normal=w1 / w2, u_star=u_star, w1=w1, w2=w2, route=route, **extra)


def _infeasible_from_dual(problem, u_star, route):
    w1, w2 = _dual_witness(problem, u_star)
    u_cert = u_star * (problem.rho / float(problem.b @ u_star))
    return Infeasible(u_cert=u_cert, u_star=u_star, w1=w1, w2=w2, route=route)


def decide(problem, cfg=None, route=Route.BOTH, w2_threshold=W2_THRESHOLD):
    """Classify ``problem`` and build its certificate.

    Routes: ``dual`` recovers the minimum-norm solution from the dual
    residual minimiser; ``primal`` recovers the minimum-norm Farkas vector
    from the primal residual minimiser (its feasible answer is a feasible
    point, not necessarily the minimum-norm one); ``both`` runs the two
    and insists they agree.

    Returns a ``Decision`` that unpacks as ``(certificate, identities, reports)``.
    """
    cfg = cfg or SolverConfig()
    route = Route(route)

    if route is Route.DUAL:
        u_star, rep, feasible = _run_dual(problem, cfg, w2_threshold)
        if feasible:
            cert = _feasible_from_dual(problem, u_star, route.value)
        else:
            cert = _infeasible_from_dual(problem, u_star, route.value)
        return Decision(cert, identity_residuals(problem, u_star=u_star), (rep,))

    if route is Route.PRIMAL:
        x_star, rep, feasible = _run_primal(problem, cfg)
        z = _primal_witness(problem, x_star)
        if feasible:
            cert = Feasible(x_normal=x_star, normality_guaranteed=False,
                            x_star=x_star, z=z, route=route.value)
        else:
            cert = Infeasible(u_cert=normal_solution_of_II(problem, x_star, cfg.feas_tol),
                              x_star=x_star, z=z, route=route.value)
        return Decision(cert, identity_residuals(problem, x_star=x_star), (rep,))

    x_star, prep, p_feasible = _run_primal(problem, cfg)
    u_star, drep, d_feasible = _run_dual(problem, cfg, w2_threshold)
    if p_feasible != d_feasible:
        _, w2 = _dual_witness(problem, u_star)
        raise InconsistentRoutes(
            f"primal route says {'feasible' if p_feasible else 'infeasible'} "
            f"(objective {prep.objective:.3e}), dual route says "
            f"{'feasible' if d_feasible else 'infeasible'} (w2 {w2:.3e})", (prep, drep))
    z = _primal_witness(problem, x_star)
    w1, w2 = _dual_witness(problem, u_star)
    if p_feasible:
        cert = Feasible(x_normal=w1 / w2, u_star=u_star, w1=w1, w2=w2,
                        x_star=x_star, z=z, route=route.value)
    else:
        cert = Infeasible(u_cert=normal_solution_of_II(problem, x_star, cfg.feas_tol),
                          x_star=x_star, z=z, u_star=u_star, w1=w1, w2=w2,
                          route=route.value)
    ids = identity_residuals(problem, x_star=x_star, u_star=u_star)
    return Decision(cert, ids, (prep, drep))


def verify_certificate(problem, cert, verify_tol=VERIFY_TOL):
    """Recheck every clause of ``cert`` against ``problem`` from scratch.

    Raises ``CertificateInvalid`` naming the first violated clause; returns
    the dual identity residuals otherwise.
    """
    A = np.asarray(problem.A, dtype=float)
    b = np.asarray(problem.b, dtype=float)
    rho = float(problem.rho)
    tol = verify_tol

    def require(ok, clause, detail=""):
        if not ok:
            raise CertificateInvalid(clause, detail)

    if isinstance(cert, Feasible):
        x = np.asarray(cert.x_normal, dtype=float)
        require(x.shape == (A.shape[1],), "shape", f"x has shape {x.shape}")
        err = float(np.max(np.abs(A.dot(x) - b)))
        require(err <= tol, "Ax=b", f"max residual {err:.3e}")
        require(float(x.min(initial=0.0)) >= -tol, "x>=0", f"min entry {x.min():.3e}")
        if cert.w2 is not None:
            require(cert.w2 > 0, "w2>0", f"w2 = {cert.w2:.3e}")
    elif isinstance(cert, Infeasible):
        u = np.asarray(cert.u_cert, dtype=float)
        require(u.shape == (A.shape[0],), "shape", f"u has shape {u.shape}")
        worst = float(np.max(A.T.dot(u), initial=-np.inf))
        require(worst <= tol, "A^T u<=0", f"max entry {worst:.3e}")
        gap = abs(float(b.dot(u)) - rho)
        require(gap <= tol, "b^T u=rho", f"|b^T u - rho| = {gap:.3e}")
        if cert.z is not None:
            require(float(np.linalg.norm(cert.z)) > 0, "z!=0")
    else:
        raise CertificateInvalid("kind", f"unknown certificate type {type(cert).__name__}")

    z_res = w_res = None
    if cert.x_star is not None:
        xs = np.asarray(cert.x_star, dtype=float)
        require(float(xs.min(initial=0.0)) >= -tol, "x*>=0")
        z = b - A.dot(xs)
        if cert.z is not None:
            require(float(np.max(np.abs(z - cert.z), initial=0.0)) <= tol, "z=b-Ax*")
        z_res = abs(float(z.dot(z)) - float(b.dot(z)))
        require(z_res <= tol * max(1.0, float(b.dot(b))), "||z||^2=b^T z", f"residual {z_res:.3e}")
    if cert.u_star is not None:
        us = np.asarray(cert.u_star, dtype=float)
        w1 = np.maximum(A.T.dot(us), 0.0)
        w2 = rho - float(b.dot(us))
        if cert.w1 is not None:
            require(float(np.max(np.abs(w1 - cert.w1), initial=0.0)) <= tol, "w1=(A^T u*)_+")
        if cert.w2 is not None:
            require(abs(w2 - cert.w2) <= tol, "w2=rho-b^T u*")
        w_res = abs(float(w1.dot(w1)) + w2 * w2 - rho * w2)
        require(w_res <= tol * rho * rho, "||w1||^2+w2^2=rho*w2", f"residual {w_res:.3e}")
        if isinstance(cert, Feasible):
            require(float(np.max(np.abs(cert.x_normal * w2 - w1))) <= tol * max(1.0, abs(w2)),
                    "x=w1/w2")
    return DualIdentityReport(z_res, w_res)
