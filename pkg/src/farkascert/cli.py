"""Command line front end.

Exit codes: 0 feasible / valid, 1 infeasible, 2 input or solver error,
3 certificate invalid.  ``FARKAS_LOG`` (quiet, info, trace) sets the
diagnostic verbosity on stderr.
"""
import argparse
import logging
import os
import sys
import time

import numpy as np

from . import _kernels
from .alternatives import (VERIFY_TOL, W2_THRESHOLD, FeasibilityProblem, Feasible,
                           Route, decide, primal_is_feasible, verify_certificate)
from .errors import BudgetExceeded, CertificateInvalid, FarkasError, MaxIterExceeded
from .instances import random_problem
from .io import certificate_document, dumps_certificate, loads_certificate, read_problem
from .oracle import enumerate_feasibility
from .reduction import build_reduction, check_diagram
from .solvers import SolverConfig, solve_dual_residual, solve_primal_residual, solve_reduced_residual

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_ERROR = 2
EXIT_INVALID = 3

ORACLE_REL_TOL = 1e-6

log = logging.getLogger("farkascert")

_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "trace": logging.DEBUG}


def _setup_logging():
    level = _LEVELS.get(os.environ.get("FARKAS_LOG", "").strip().lower(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _fail(err):
    print(f"error {err.code}: {err}", file=sys.stderr)
    return EXIT_INVALID if isinstance(err, CertificateInvalid) else EXIT_ERROR


def _fmt(v):
    return " ".join(repr(float(x)) for x in v)


def _fmt_short(v):
    return " ".join(f"{float(x):.15g}" for x in v)


def cmd_decide(args):
    A, b = read_problem(args.problem)
    problem = FeasibilityProblem(A, b, args.rho)
    cfg = SolverConfig(grad_tol=args.tol) if args.tol else SolverConfig()
    cert, ids, reports = decide(problem, cfg, Route(args.route))
    text = dumps_certificate(certificate_document(cert, problem.rho, ids, reports))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FEASIBLE if isinstance(cert, Feasible) else EXIT_INFEASIBLE


def _rel_err(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def cmd_verify(args):
    with open(args.certificate) as fh:
        cert, rho, _ = loads_certificate(fh.read())
    A, b = read_problem(args.problem)
    problem = FeasibilityProblem(A, b, rho)
    ids = verify_certificate(problem, cert, args.tol)
    print(f"certificate valid: {cert.status}")
    print(f"z identity residual: {ids.z_identity_residual}")
    print(f"w identity residual: {ids.w_identity_residual}")
    if args.oracle:
        try:
            verdict = enumerate_feasibility(problem)
        except BudgetExceeded as exc:
            print(f"oracle skipped: {exc}")
            return EXIT_FEASIBLE
        print(f"oracle verdict: {'feasible' if verdict.feasible else 'infeasible'}")
        if verdict.feasible != isinstance(cert, Feasible):
            raise CertificateInvalid("oracle", "oracle disagrees with the certificate status")
        if verdict.feasible and cert.normality_guaranteed:
            err = _rel_err(cert.x_normal, verdict.min_norm_point)
            print(f"oracle min-norm point: {_fmt(verdict.min_norm_point)} (rel. error {err:.3e})")
            if err > ORACLE_REL_TOL:
                raise CertificateInvalid("oracle min-norm", f"relative error {err:.3e}")
        if not verdict.feasible and verdict.min_norm_II_witness is not None and cert.x_star is not None:
            err = _rel_err(cert.u_cert, verdict.min_norm_II_witness)
            print(f"oracle min-norm witness: {_fmt(verdict.min_norm_II_witness)} (rel. error {err:.3e})")
            if err > ORACLE_REL_TOL:
                raise CertificateInvalid("oracle min-norm", f"relative error {err:.3e}")
    return EXIT_FEASIBLE


def cmd_reduce(args):
    A, b = read_problem(args.problem)
    problem = FeasibilityProblem(A, b, args.rho)
    red = build_reduction(problem)
    print(f"nu = {red.nu}")
    if red.nu == 0:
        print("note: nullity 0; (I_y) reduces to x_bar >= 0")
    if args.emit_k:
        print("K =")
        for r in red.K:
            print("  " + _fmt_short(r))
    if args.emit_xbar:
        print(f"x_bar = {_fmt_short(red.x_bar)}")
    rep = check_diagram(problem)
    yes = {True: "yes", False: "no"}
    print(f"diagram: (I) {yes[rep.I]}  (I_y) {yes[rep.I_y]}  (II) {yes[rep.II]}  (II_v) {yes[rep.II_v]}")
    if rep.I_y:
        print(f"y = {_fmt_short(rep.y)}")
    if rep.II:
        print(f"u = {_fmt_short(rep.u)}")
        print(f"v = {_fmt_short(rep.v)}")
    return EXIT_FEASIBLE if rep.I else EXIT_INFEASIBLE


def _bench_route(problem, route, cfg):
    """Return ``(iterations, verdict)`` for one route on one instance."""
    try:
        if route == "primal":
            _, rep = solve_primal_residual(problem.A, problem.b, cfg)
            ok = primal_is_feasible(problem, rep.objective, cfg)
            its = rep.iterations
        elif route == "dual":
            u, rep = solve_dual_residual(problem.A, problem.b, problem.rho, cfg)
            ok = problem.rho - problem.b @ u > W2_THRESHOLD * problem.rho
            its = rep.iterations
        elif route == "both":
            cert, _, reps = decide(problem, cfg, Route.BOTH)
            ok = isinstance(cert, Feasible)
            its = sum(r.iterations for r in reps)
            return its, "feasible" if ok else "infeasible"
        else:
            red = build_reduction(problem)
            _, rep = solve_reduced_residual(red.K, red.x_bar, cfg)
            ok = rep.objective <= cfg.feas_tol * max(1.0, float(red.x_bar @ red.x_bar))
            its = rep.iterations
    except (MaxIterExceeded, FarkasError) as exc:
        return 0, exc.code
    if not rep.converged:
        return its, "unconverged"
    return its, "feasible" if ok else "infeasible"


BENCH_ROUTES = ("primal", "dual", "both", "reduced")


def cmd_bench(args):
    routes = [r.strip() for r in args.routes.split(",") if r.strip()]
    bad = [r for r in routes if r not in BENCH_ROUTES]
    if bad or not routes:
        raise SystemExit(f"unknown route(s) {bad}; choose from {', '.join(BENCH_ROUTES)}")
    if args.m < 1 or args.n < args.m or args.count < 1:
        raise SystemExit("need 1 <= m <= n and count >= 1")
    rng = np.random.default_rng(args.seed)
    cfg = SolverConfig()
    kinds = ("feasible", "infeasible") if args.kind == "mixed" else (args.kind,)
    header = f"{'instance':>8}  {'kind':<10}  {'route':<7}  {'iterations':>10}  {'verdict':<16}"
    if not args.no_times:
        header += f"  {'time_ms':>10}"
    # compile / load the kernels before anything is timed
    warm = random_problem(np.random.default_rng(0), 1, 2, "feasible")
    for route in routes:
        _bench_route(warm, route, cfg)
    print(f"# backend={_kernels.BACKEND} m={args.m} n={args.n} count={args.count} seed={args.seed}")
    print(header.rstrip())
    for i in range(args.count):
        kind = kinds[i % len(kinds)]
        problem = random_problem(rng, args.m, args.n, kind)
        for route in routes:
            t0 = time.perf_counter()
            its, verdict = _bench_route(problem, route, cfg)
            ms = 1e3 * (time.perf_counter() - t0)
            line = f"{i:>8}  {kind:<10}  {route:<7}  {its:>10}  {verdict:<16}"
            if not args.no_times:
                line += f"  {ms:>10.3f}"
            print(line.rstrip())
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="farkascert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="classify a problem file and emit its certificate")
    d.add_argument("problem")
    d.add_argument("--rho", type=float, default=1.0)
    d.add_argument("--route", choices=[r.value for r in Route], default="both")
    d.add_argument("--tol", type=float, default=None, help="solver gradient tolerance")
    d.add_argument("--output", "-o", default=None)
    d.set_defaults(func=cmd_decide)

    v = sub.add_parser("verify", help="recheck a certificate against its problem file")
    v.add_argument("certificate")
    v.add_argument("problem")
    v.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    v.add_argument("--tol", type=float, default=VERIFY_TOL)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="null-space reduction and four-system diagram")
    r.add_argument("problem")
    r.add_argument("--rho", type=float, default=1.0)
    r.add_argument("--emit-k", action="store_true")
    r.add_argument("--emit-xbar", action="store_true")
    r.set_defaults(func=cmd_reduce)

    bch = sub.add_parser("bench", help="time the routes on seeded random instances")
    bch.add_argument("--m", type=int, default=20)
    bch.add_argument("--n", type=int, default=50)
    bch.add_argument("--count", type=int, default=10)
    bch.add_argument("--seed", type=int, default=0)
    bch.add_argument("--routes", default="primal,dual,reduced")
    bch.add_argument("--kind", choices=["mixed", "feasible", "infeasible", "generic"], default="mixed")
    bch.add_argument("--no-times", action="store_true", help="omit the wall-time column")
    bch.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FarkasError as err:
        return _fail(err)
    except (OSError, ValueError) as err:
        print(f"error E_INPUT: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
