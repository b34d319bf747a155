"""Hot inner loops.

Every kernel is written in the numpy subset numba understands, so the same
source serves both backends.  With ``FARKAS_NUMBA=0`` in the environment (or
when numba is not importable) the functions run as plain numpy code.
"""
import os

import numpy as np

_WANT_NUMBA = os.environ.get("FARKAS_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    import numba

    USE_NUMBA = True
    jit = numba.njit(cache=True)
except ImportError:
    USE_NUMBA = False

    def jit(fn):
        return fn


BACKEND = "numba" if USE_NUMBA else "numpy"

# Backtracking steps allowed before a line search is declared stalled.
_MAX_BACKTRACK = 60


# ---------------------------------------------------------------- elimination


@jit
def gauss_jordan_kernel(M, tol):
    """Reduced row echelon form with partial row pivoting.

    Returns ``(R, T, pivots, rank)`` with ``T @ M == R``.  A column whose best
    remaining pivot is ``<= tol`` in magnitude is skipped (it becomes a
    non-pivot column).
    """
    m, n = M.shape
    R = M.copy()
    T = np.eye(m)
    pivots = np.empty(min(m, n), dtype=np.int64)
    row = 0
    for col in range(n):
        if row == m:
            break
        p = row
        best = abs(R[row, col])
        for i in range(row + 1, m):
            a = abs(R[i, col])
            if a > best:
                best = a
                p = i
        if best <= tol:
            for i in range(row, m):
                R[i, col] = 0.0
            continue
        if p != row:
            for j in range(n):
                tmp = R[row, j]
                R[row, j] = R[p, j]
                R[p, j] = tmp
            for j in range(m):
                tmp = T[row, j]
                T[row, j] = T[p, j]
                T[p, j] = tmp
        piv = R[row, col]
        for j in range(n):
            R[row, j] /= piv
        for j in range(m):
            T[row, j] /= piv
        R[row, col] = 1.0
        for i in range(m):
            if i == row:
                continue
            f = R[i, col]
            if f != 0.0:
                for j in range(n):
                    R[i, j] -= f * R[row, j]
                for j in range(m):
                    T[i, j] -= f * T[row, j]
                R[i, col] = 0.0
        pivots[row] = col
        row += 1
    for i in range(m):
        for j in range(n):
            if abs(R[i, j]) <= tol:
                R[i, j] = 0.0
    return R, T, pivots[:row].copy(), row


# ------------------------------------------- half squared residual over x >= 0


@jit
def nnls_value(A, b, x):
    r = b - A @ x
    return 0.5 * (r @ r)


@jit
def nnls_gradient(A, b, x):
    return -(A.T @ (b - A @ x))


@jit
def projected_gradient_norm(x, g):
    s = 0.0
    for j in range(x.shape[0]):
        step = x[j] - max(x[j] - g[j], 0.0)
        s += step * step
    return np.sqrt(s)


@jit
def _nnls_change(A, g, step):
    """f(x + step) - f(x), expanded exactly for the quadratic."""
    As = A @ step
    return g @ step + 0.5 * (As @ As)


@jit
def nnls_kernel(A, b, x0, grad_tol, max_iter, beta, sigma):
    """Projected gradient with Armijo backtracking, accelerated by an exact
    minimisation over the current free face after every gradient step.

    Objective changes are evaluated by expansion around the iterate, not by
    subtracting two objective values, so the line search stays meaningful
    down to tiny gradients.

    Returns ``(x, iterations, objective, grad_norm, converged, history)``.
    """
    m, n = A.shape
    x = np.maximum(x0, 0.0)
    f = nnls_value(A, b, x)
    g = nnls_gradient(A, b, x)
    gn = projected_gradient_norm(x, g)
    hist = np.empty(max_iter + 1)
    hist[0] = f
    it = 0
    converged = False
    while True:
        if gn <= grad_tol:
            converged = True
            break
        if it >= max_iter:
            break
        it += 1

        # gradient step along the projection arc
        dg = np.zeros(n)
        for j in range(n):
            if x[j] > 0.0 or g[j] < 0.0:
                dg[j] = -g[j]
        Ad = A @ dg
        curv = Ad @ Ad
        t = (dg @ dg) / curv if curv > 0.0 else 1.0
        accepted = False
        step = np.zeros(n)
        change = 0.0
        for _ in range(_MAX_BACKTRACK):
            step = np.maximum(x - t * g, 0.0) - x
            change = _nnls_change(A, g, step)
            if change <= sigma * (g @ step) and change < 0.0:
                accepted = True
                break
            t *= beta
        if not accepted:
            break
        x = x + step
        for j in range(n):
            if x[j] < 0.0:
                x[j] = 0.0
        f += change
        g = nnls_gradient(A, b, x)

        # exact minimiser on the free face; when it leaves the orthant, stop
        # at the boundary, drop the blocking variable and solve again
        for _ in range(n):
            k = 0
            for j in range(n):
                if x[j] > 0.0:
                    k += 1
            if k == 0:
                break
            idx = np.empty(k, dtype=np.int64)
            k = 0
            for j in range(n):
                if x[j] > 0.0:
                    idx[k] = j
                    k += 1
            AF = np.empty((m, k))
            for i in range(m):
                for p in range(k):
                    AF[i, p] = A[i, idx[p]]
            zF = np.linalg.lstsq(AF, b, -1.0)[0]
            alpha = 1.0
            hit = -1
            for p in range(k):
                dp = zF[p] - x[idx[p]]
                if dp < 0.0:
                    ratio = -x[idx[p]] / dp
                    if ratio < alpha:
                        alpha = ratio
                        hit = p
            step = np.zeros(n)
            for p in range(k):
                step[idx[p]] = alpha * (zF[p] - x[idx[p]])
            if hit >= 0:
                step[idx[hit]] = -x[idx[hit]]
            change = _nnls_change(A, g, step)
            if not change < 0.0:
                break
            x = x + step
            for j in range(n):
                if x[j] < 0.0:
                    x[j] = 0.0
            f += change
            g = nnls_gradient(A, b, x)
            if hit < 0:
                break

        gn = projected_gradient_norm(x, g)
        hist[it] = f
    f = nnls_value(A, b, x)
    return x, it, f, gn, converged, hist[: it + 1].copy()


# ------------------ 0.5*||(P^T u - c)_+||^2 + 0.5*||Q^T u - d||^2 (unconstrained)


@jit
def pwq_value(P, c, Q, d, u):
    s = np.maximum(P.T @ u - c, 0.0)
    q = Q.T @ u - d
    return 0.5 * (s @ s) + 0.5 * (q @ q)


@jit
def pwq_gradient(P, c, Q, d, u):
    s = np.maximum(P.T @ u - c, 0.0)
    q = Q.T @ u - d
    return P @ s + Q @ q


@jit
def _pwq_change(s, q, e, h, t):
    """f(u + t*dir) - f(u) given s = P^T u - c, q = Q^T u - d, e = P^T dir,
    h = Q^T dir, expanded piece by piece to avoid cancellation."""
    total = 0.0
    for j in range(s.shape[0]):
        a = s[j]
        delta = t * e[j]
        if a > 0.0 and a + delta > 0.0:
            total += delta * (a + 0.5 * delta)
        elif a > 0.0:
            total -= 0.5 * a * a
        elif a + delta > 0.0:
            total += 0.5 * (a + delta) * (a + delta)
    for j in range(q.shape[0]):
        delta = t * h[j]
        total += delta * (q[j] + 0.5 * delta)
    return total


@jit
def _armijo(s, q, e, h, t, slope, beta, sigma):
    for _ in range(_MAX_BACKTRACK):
        change = _pwq_change(s, q, e, h, t)
        if change <= sigma * t * slope and change < 0.0:
            return t, change
        t *= beta
    return 0.0, 0.0


@jit
def _cholesky_solve(H, rhs):
    """Solve ``H x = rhs`` for symmetric ``H``; ``ok`` is False when a
    Cholesky pivot is not safely positive (``H`` numerically singular)."""
    k = H.shape[0]
    L = np.zeros((k, k))
    scale = 0.0
    for i in range(k):
        if H[i, i] > scale:
            scale = H[i, i]
    floor = 64.0 * k * np.finfo(np.float64).eps * max(scale, 1e-300)
    for j in range(k):
        acc = H[j, j]
        for p in range(j):
            acc -= L[j, p] * L[j, p]
        if acc <= floor:
            return np.zeros(k), False
        L[j, j] = np.sqrt(acc)
        for i in range(j + 1, k):
            acc = H[i, j]
            for p in range(j):
                acc -= L[i, p] * L[j, p]
            L[i, j] = acc / L[j, j]
    z = np.empty(k)
    for i in range(k):
        acc = rhs[i]
        for p in range(i):
            acc -= L[i, p] * z[p]
        z[i] = acc / L[i, i]
    x = np.empty(k)
    for i in range(k - 1, -1, -1):
        acc = z[i]
        for p in range(i + 1, k):
            acc -= L[p, i] * x[p]
        x[i] = acc / L[i, i]
    return x, True


@jit
def pwq_newton_kernel(P, c, Q, d, u0, grad_tol, max_iter, beta, sigma, delta):
    """Generalised Newton method with Armijo backtracking.

    The generalised Hessian is ``P D P^T + Q Q^T`` where ``D`` selects the
    strictly positive affine components; when it is numerically singular
    ``delta`` (scaled by the largest diagonal entry) is added to its diagonal.  If the Newton direction cannot be
    accepted the step falls back to steepest descent.

    Returns ``(u, iterations, objective, grad_norm, converged, history)``.
    """
    dim = P.shape[0]
    npos = P.shape[1]
    u = u0.copy()
    f = pwq_value(P, c, Q, d, u)
    g = pwq_gradient(P, c, Q, d, u)
    gn = np.sqrt(g @ g)
    hist = np.empty(max_iter + 1)
    hist[0] = f
    it = 0
    converged = False
    while True:
        if gn <= grad_tol:
            converged = True
            break
        if it >= max_iter:
            break
        it += 1

        s = P.T @ u - c
        q = Q.T @ u - d
        Pa = np.empty((dim, npos))
        for j in range(npos):
            on = 1.0 if s[j] > 0.0 else 0.0
            for i in range(dim):
                Pa[i, j] = P[i, j] * on
        H = Pa @ Pa.T + Q @ Q.T
        direction, ok = _cholesky_solve(H, -g)
        if not ok:
            scale = 1.0
            for i in range(dim):
                if H[i, i] > scale:
                    scale = H[i, i]
            Hreg = H.copy()
            for i in range(dim):
                Hreg[i, i] += delta * scale
            direction = np.linalg.solve(Hreg, -g)
        slope = g @ direction
        if not slope < 0.0:
            direction = -g
            slope = -(g @ g)
        t, change = _armijo(s, q, P.T @ direction, Q.T @ direction, 1.0, slope, beta, sigma)
        if t == 0.0:
            direction = -g
            slope = -(g @ g)
            curv = g @ (H @ g)
            t0 = (g @ g) / curv if curv > 0.0 else 1.0
            t, change = _armijo(s, q, P.T @ direction, Q.T @ direction, t0, slope, beta, sigma)
        if t == 0.0:
            break
        u = u + t * direction
        f += change
        g = pwq_gradient(P, c, Q, d, u)
        gn = np.sqrt(g @ g)
        hist[it] = f
    f = pwq_value(P, c, Q, d, u)
    return u, it, f, gn, converged, hist[: it + 1].copy()
