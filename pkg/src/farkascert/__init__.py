"""Feasibility certificates for ``A x = b, x >= 0`` via residual minimisation
of the alternative systems, plus the null-space reduction of both systems."""
from ._kernels import BACKEND
from .alternatives import (DualIdentityReport, Feasible, FeasibilityProblem, Infeasible,
                           Route, decide, normal_solution_of_II, verify_certificate)
from .errors import FarkasError
from .linalg_core import gauss_jordan, least_squares_apply, null_space_basis
from .reduction import (build_reduction, check_diagram, map_u_to_v, map_v_to_u,
                        map_x_to_y, map_y_to_x)
from .solvers import (SolverConfig, SolverReport, solve_dual_residual,
                      solve_primal_residual, solve_reduced_residual)

__all__ = [
    "BACKEND", "DualIdentityReport", "FarkasError", "Feasible", "FeasibilityProblem",
    "Infeasible", "Route", "SolverConfig", "SolverReport", "build_reduction",
    "check_diagram", "decide", "gauss_jordan", "least_squares_apply", "map_u_to_v",
    "map_v_to_u", "map_x_to_y", "map_y_to_x", "normal_solution_of_II",
    "null_space_basis", "solve_dual_residual", "solve_primal_residual",
    "solve_reduced_residual", "verify_certificate",
]
