import numpy as np
import pytest

from farkascert.errors import DimensionMismatch, ZeroRhs
from farkascert.instances import instance_stream, random_problem
from farkascert.solvers import (SolverConfig, dual_gradient, dual_objective, primal_gradient,
                                primal_objective, reduced_gradient, reduced_objective,
                                solve_dual_residual, solve_primal_residual,
                                solve_reduced_residual)

from conftest import central_difference, grid_argmin


def test_primal_scalar_clamps_at_zero():
    x, rep = solve_primal_residual([[1.0]], [-1.0])
    t_best, f_best = grid_argmin(lambda t: 0.5 * (-1 - t) ** 2, 0.0, 5.0)
    assert x[0] == pytest.approx(t_best, abs=1e-6) and x[0] == 0.0
    assert rep.objective == pytest.approx(f_best) == 0.5
    assert rep.converged and rep.active_set == (0,)


def test_primal_feasible_row_drives_residual_to_zero():
    A = np.array([[1.0, 1.0]])
    x, rep = solve_primal_residual(A, [1.0])
    assert rep.objective <= 1e-20
    assert np.all(x >= 0)
    np.testing.assert_allclose(A @ x, [1.0])


def test_primal_separable_clamp():
    x, rep = solve_primal_residual(np.eye(2), [-1.0, 1.0])
    np.testing.assert_allclose(x, np.maximum([-1.0, 1.0], 0.0))
    assert rep.objective == pytest.approx(0.5)


def test_primal_rejects_zero_rhs():
    with pytest.raises(ZeroRhs):
        solve_primal_residual([[1.0, 2.0]], [0.0])


def test_primal_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_primal_residual([[1.0, 2.0]], [1.0, 2.0])


def test_dual_single_row_matches_grid_search():
    u, rep = solve_dual_residual([[1.0, 1.0]], [1.0], 1.0)
    g = lambda t: 0.5 * (2 * max(t, 0.0) ** 2 + (1.0 - t) ** 2)
    t_best, _ = grid_argmin(g, -3.0, 3.0)
    assert u[0] == pytest.approx(1 / 3, abs=1e-12)
    assert t_best == pytest.approx(1 / 3, abs=1e-6)
    w1 = np.maximum(np.array([[1.0, 1.0]]).T @ u, 0)
    np.testing.assert_allclose(w1, [1 / 3, 1 / 3])
    assert 1.0 - u[0] == pytest.approx(2 / 3)
    assert rep.active_set == (0, 1)


def test_dual_two_by_three_stationary():
    A = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
    b = np.array([1.0, 1.0])
    u, rep = solve_dual_residual(A, b, 1.0)
    np.testing.assert_allclose(u, [0.2, 0.2], atol=1e-12)
    np.testing.assert_allclose(central_difference(lambda v: dual_objective(A, b, 1.0, v), u),
                               0.0, atol=1e-8)
    np.testing.assert_allclose(np.maximum(A.T @ u, 0), [0.2, 0.2, 0.4], atol=1e-12)
    assert 1.0 - b @ u == pytest.approx(0.6)


def test_dual_infeasible_reaches_zero():
    A = np.array([[1.0, 1.0]])
    u, rep = solve_dual_residual(A, [-1.0], 1.0)
    assert u[0] == pytest.approx(-1.0)
    assert rep.objective <= 1e-24
    assert np.all(A.T @ u <= 0) and -u[0] == pytest.approx(1.0)


def test_dual_rejects_nonpositive_rho():
    with pytest.raises(ValueError):
        solve_dual_residual([[1.0]], [1.0], 0.0)


def test_reduced_feasible_interval():
    y, rep = solve_reduced_residual([[-1.0, 1.0]], [0.5, 0.5])
    assert rep.objective == 0.0 and y[0] == 0.0
    assert -0.5 <= y[0] <= 0.5


def test_reduced_infeasible_interval():
    K, x_bar = [[-1.0, 1.0]], [-0.5, -0.5]
    y, rep = solve_reduced_residual(K, x_bar)
    t_best, h_best = grid_argmin(lambda t: reduced_objective(K, x_bar, [t]), -3, 3)
    assert y[0] == pytest.approx(t_best, abs=1e-6)
    assert rep.objective == pytest.approx(h_best) == pytest.approx(0.25)


def test_reduced_zero_nullity():
    y, rep = solve_reduced_residual(np.zeros((0, 3)), [1.0, 0.0, 2.0])
    assert y.shape == (0,) and rep.objective == 0.0 and rep.converged


def test_reduced_zero_nullity_violated():
    _, rep = solve_reduced_residual(np.zeros((0, 2)), [1.0, -2.0])
    assert rep.objective == pytest.approx(2.0)


def _kinks_far(values, margin=1e-4):
    return np.all(np.abs(values) > margin)


@pytest.mark.parametrize("seed", range(5))
def test_gradients_match_finite_differences(seed):
    rng = np.random.default_rng(seed)
    for kind in ("feasible", "infeasible", "generic"):
        p = random_problem(rng, 4, 7, kind)
        K = rng.standard_normal((3, 7))
        xb = rng.standard_normal(7)
        for _ in range(10):
            x = rng.standard_normal(7)
            g = primal_gradient(p.A, p.b, x)
            fd = central_difference(lambda v: primal_objective(p.A, p.b, v), x)
            assert np.linalg.norm(fd - g) <= 1e-5 * np.linalg.norm(g)
            u = rng.standard_normal(4)
            if _kinks_far(p.A.T @ u):
                g = dual_gradient(p.A, p.b, p.rho, u)
                fd = central_difference(lambda v: dual_objective(p.A, p.b, p.rho, v), u)
                assert np.linalg.norm(fd - g) <= 1e-5 * np.linalg.norm(g)
            y = rng.standard_normal(3)
            if _kinks_far(K.T @ y - xb):
                g = reduced_gradient(K, xb, y)
                fd = central_difference(lambda v: reduced_objective(K, xb, v), y)
                assert np.linalg.norm(fd - g) <= 1e-5 * max(np.linalg.norm(g), 1e-12)


def test_monotone_descent_all_solvers():
    for _, _, p in instance_stream(11, 60):
        _, r1 = solve_primal_residual(p.A, p.b)
        _, r2 = solve_dual_residual(p.A, p.b, p.rho)
        assert np.all(np.diff(r1.history) <= 0)
        assert np.all(np.diff(r2.history) <= 0)
        assert r1.converged and r2.converged
        assert r1.grad_norm <= SolverConfig().grad_tol
    rng = np.random.default_rng(3)
    for _ in range(40):
        K = rng.standard_normal((3, 6))
        _, r3 = solve_reduced_residual(K, rng.standard_normal(6))
        assert np.all(np.diff(r3.history) <= 0) and r3.converged


def test_exactness_dichotomy():
    cfg = SolverConfig()
    for _, _, p in instance_stream(12, 150):
        _, rp = solve_primal_residual(p.A, p.b, cfg)
        _, rd = solve_dual_residual(p.A, p.b, p.rho, cfg)
        zero_p = rp.objective <= cfg.feas_tol * max(1.0, p.b @ p.b)
        zero_d = rd.objective <= cfg.feas_tol * p.rho ** 2
        assert zero_p != zero_d


def test_rho_scaling_covariance():
    for _, _, p in instance_stream(13, 60):
        u1, r1 = solve_dual_residual(p.A, p.b, 1.0)
        for lam in (0.1, 17.0):
            scaled = dual_objective(p.A, p.b, lam, lam * u1)
            assert scaled == pytest.approx(lam ** 2 * r1.objective, rel=1e-9, abs=1e-20 * lam ** 2)
            ul, _ = solve_dual_residual(p.A, p.b, lam)
            w2_1, w2_l = 1.0 - p.b @ u1, lam - p.b @ ul
            if w2_1 > 1e-7:
                np.testing.assert_allclose(np.maximum(p.A.T @ ul, 0) / w2_l,
                                           np.maximum(p.A.T @ u1, 0) / w2_1, atol=1e-8)


def test_random_restarts_agree():
    rng = np.random.default_rng(14)
    cfg = SolverConfig()
    for _, _, p in instance_stream(14, 25):
        vals = [solve_dual_residual(p.A, p.b, p.rho, cfg, u0=5 * rng.standard_normal(p.A.shape[0]))[1].objective
                for _ in range(6)]
        vals.append(solve_dual_residual(p.A, p.b, p.rho, cfg)[1].objective)
        lo, hi = min(vals), max(vals)
        assert hi - lo <= 1e-7 * max(lo, cfg.feas_tol * p.rho ** 2)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(grad_tol=0)
    with pytest.raises(ValueError):
        SolverConfig(max_iter=0)
    with pytest.raises(ValueError):
        SolverConfig(armijo_beta=1.0)


def test_max_iter_returns_best_iterate_unconverged():
    rng = np.random.default_rng(5)
    p = random_problem(rng, 6, 10, "infeasible")
    cfg = SolverConfig(max_iter=1, grad_tol=1e-300)
    x, rep = solve_primal_residual(p.A, p.b, cfg)
    assert not rep.converged and rep.iterations == 1
    assert rep.objective <= 0.5 * p.b @ p.b
