"""Compare the numba kernels with the pure-numpy fallback.

Each backend runs in its own interpreter (the choice is fixed at import time
by ``FARKAS_NUMBA``).  The first solve in each process is untimed so numba
compilation and cache loading stay out of the numbers.

    python3 benchmarks/bench_backends.py --m 20 --n 50 --count 30
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from farkascert import _kernels, build_reduction
from farkascert.instances import random_problem
from farkascert.solvers import solve_dual_residual, solve_primal_residual, solve_reduced_residual

m, n, count, seed, repeat = map(int, sys.argv[1:6])
routes = {
    "primal": lambda p: solve_primal_residual(p.A, p.b),
    "dual": lambda p: solve_dual_residual(p.A, p.b, p.rho),
    "reduced": lambda p: solve_reduced_residual(*(lambda r: (r.K, r.x_bar))(build_reduction(p))),
}
warm = random_problem(np.random.default_rng(0), 2, 4, "feasible")
for fn in routes.values():
    fn(warm)
rng = np.random.default_rng(seed)
kinds = ("feasible", "infeasible")
problems = [random_problem(rng, m, n, kinds[i % 2]) for i in range(count)]
out = {"backend": _kernels.BACKEND}
for name, fn in routes.items():
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for p in problems:
            fn(p)
        best = min(best, time.perf_counter() - t0)
    out[name] = 1e3 * best / count
print(json.dumps(out))
"""


def run(flag, args):
    env = {**os.environ, "FARKAS_NUMBA": flag}
    proc = subprocess.run([sys.executable, "-c", WORKER, str(args.m), str(args.n), str(args.count),
                           str(args.seed), str(args.repeat)],
                          capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=20)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    fast, slow = run("1", args), run("0", args)
    print(f"m={args.m} n={args.n} count={args.count} seed={args.seed} (best of {args.repeat}, ms per instance)")
    print(f"{'route':<8}  {fast['backend']:>10}  {slow['backend']:>10}  {'speedup':>8}")
    for route in ("primal", "dual", "reduced"):
        a, b = fast[route], slow[route]
        print(f"{route:<8}  {a:>10.3f}  {b:>10.3f}  {b / a:>7.1f}x")


if __name__ == "__main__":
    main()
