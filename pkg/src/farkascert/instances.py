"""Seeded random instance recipes.

All matrices have standard normal entries.

* ``feasible``: ``b = A x0`` with ``x0`` uniform on [0, 1]^n.
* ``infeasible``: a unit vector ``u`` is drawn and the columns of ``A`` are
  shifted so that ``A^T u = -s`` with ``s`` uniform on [0, 1]^n; ``b`` is
  shifted so that ``b^T u`` is uniform on [0.2, 1.2].  ``u`` then certifies
  infeasibility with margin ``b^T u``.
* ``generic``: ``A`` and ``b`` both standard normal (either outcome).
"""
import numpy as np

from .alternatives import FeasibilityProblem

KINDS = ("feasible", "infeasible", "generic")


def random_problem(rng, m, n, kind="generic", rho=1.0):
    A = rng.standard_normal((m, n))
    if kind == "feasible":
        x0 = rng.uniform(0.0, 1.0, n)
        b = A @ x0
    elif kind == "infeasible":
        u = rng.standard_normal(m)
        u /= np.linalg.norm(u)
        s = rng.uniform(0.0, 1.0, n)
        A -= np.outer(u, u @ A + s)
        b = rng.standard_normal(m)
        b += (rng.uniform(0.2, 1.2) - u @ b) * u
    elif kind == "generic":
        b = rng.standard_normal(m)
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    if not np.linalg.norm(b) > 0:
        b = rng.standard_normal(m)
    return FeasibilityProblem(A, b, rho)


def instance_stream(seed, count, m_range=(1, 8), n_max=12, kinds=KINDS, rho=1.0):
    """Yield ``(index, kind, problem)`` with ``m`` in ``m_range`` and
    ``n`` in ``[m, n_max]``; kinds cycle in order."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        m = int(rng.integers(m_range[0], m_range[1] + 1))
        n = int(rng.integers(m, max(m, n_max) + 1))
        kind = kinds[i % len(kinds)]
        yield i, kind, random_problem(rng, m, n, kind, rho)
