import numpy as np
import pytest

from farkascert import FeasibilityProblem


def grid_argmin(fun, lo, hi, rounds=6, points=2001):
    """Minimise a 1-D function by successively refined grid search."""
    lo0, hi0 = lo, hi
    for _ in range(rounds):
        ts = np.linspace(lo, hi, points)
        vals = np.array([fun(t) for t in ts])
        k = int(np.argmin(vals))
        width = (hi - lo) / (points - 1)
        lo, hi = max(lo0, ts[k] - 2 * width), min(hi0, ts[k] + 2 * width)
    best = ts[k]
    return best, fun(best)


def central_difference(fun, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


WORKED = {
    "row11_feasible": ([[1.0, 1.0]], [1.0]),
    "row11_infeasible": ([[1.0, 1.0]], [-1.0]),
    "two_by_three": ([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]], [1.0, 1.0]),
    "scalar_infeasible": ([[1.0]], [-1.0]),
    "identity_mixed": ([[1.0, 0.0], [0.0, 1.0]], [-1.0, 1.0]),
    "identity_feasible": ([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0]),
}


@pytest.fixture
def worked():
    return {k: FeasibilityProblem(A, b) for k, (A, b) in WORKED.items()}
