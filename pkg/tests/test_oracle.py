import itertools

import numpy as np
import pytest

from farkascert import FeasibilityProblem
from farkascert.errors import BudgetExceeded
from farkascert.oracle import (basic_feasible_points, enumerate_feasibility, min_norm_II_witness,
                               min_norm_point)


def _as_set(points):
    return {tuple(np.round(p, 12)) for p in points}


def test_row_feasible():
    v = enumerate_feasibility(FeasibilityProblem([[1.0, 1.0]], [1.0]))
    assert v.feasible
    assert _as_set(v.basic_feasible_points) == {(1.0, 0.0), (0.0, 1.0)}
    np.testing.assert_allclose(v.min_norm_point, [0.5, 0.5])
    assert v.min_norm_II_witness is None


def test_two_by_three_min_norm():
    v = enumerate_feasibility(FeasibilityProblem([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]], [1.0, 1.0]))
    np.testing.assert_allclose(v.min_norm_point, [1 / 3, 1 / 3, 2 / 3])


def test_row_infeasible():
    v = enumerate_feasibility(FeasibilityProblem([[1.0, 1.0]], [-1.0]))
    assert not v.feasible and v.basic_feasible_points == [] and v.min_norm_point is None


def test_witness_scalar():
    np.testing.assert_allclose(min_norm_II_witness([[1.0]], [-1.0], 1.0), [-1.0])


def test_witness_identity():
    # min u1^2 + u2^2 s.t. u <= 0, -u1 + u2 = 1
    np.testing.assert_allclose(min_norm_II_witness(np.eye(2), [-1.0, 1.0], 1.0), [-1.0, 0.0], atol=1e-15)


def test_witness_absent_when_feasible():
    assert min_norm_II_witness([[1.0, 1.0]], [1.0], 1.0) is None


def test_budgets():
    with pytest.raises(BudgetExceeded):
        min_norm_II_witness(np.ones((9, 9)), np.ones(9))
    with pytest.raises(BudgetExceeded):
        min_norm_point(np.ones((1, 15)), np.ones(1))


def test_min_norm_point_against_dense_sampling():
    # min-norm point beats every feasible point on a fine simplex grid
    A = np.array([[1.0, 2.0, 3.0]])
    b = np.array([2.0])
    x_min = min_norm_point(A, b)
    best = np.inf
    for i, j in itertools.product(range(201), repeat=2):
        x1, x2 = 2.0 * i / 200, 1.0 * j / 200
        x3 = (2.0 - x1 - 2 * x2) / 3
        if x3 >= 0:
            best = min(best, np.linalg.norm([x1, x2, x3]))
    assert np.linalg.norm(x_min) <= best + 1e-12
    # closed form for a single positive row: x = b a / ||a||^2
    np.testing.assert_allclose(x_min, b[0] * A[0] / (A[0] @ A[0]))


def test_bfs_are_vertices():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((3, 6))
    b = A @ rng.uniform(0, 1, 6)
    for x in basic_feasible_points(A, b):
        np.testing.assert_allclose(A @ x, b, atol=1e-9)
        assert np.all(x >= 0)
        support = np.flatnonzero(x > 1e-12)
        assert np.linalg.matrix_rank(A[:, support]) == len(support)
