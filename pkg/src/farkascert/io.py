"""Problem files and certificate documents.

Problem file grammar (``#`` lines and blank lines are skipped)::

    m n
    a11 ... a1n
    ...
    am1 ... amn
    b1 ... bm

Certificate documents are JSON.  Floats are written with Python's shortest
round-trip representation (at most 17 significant digits), so parsing a
document back reproduces every value exactly.
"""
import json
import math

import numpy as np

from .alternatives import Feasible, Infeasible
from .errors import ParseError


def parse_problem(text):
    """Return ``(A, b)`` parsed from problem-file text."""
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    if not lines:
        raise ParseError("empty problem file")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"header must be 'm n', got {lines[0]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"header must hold two integers, got {lines[0]!r}") from None
    if m < 1 or n < 1:
        raise ParseError(f"dimensions must be positive, got m={m} n={n}")
    body = lines[1:]
    if len(body) != m + 1:
        raise ParseError(f"expected {m + 1} data lines after the header, found {len(body)}")

    def row(line, width, what):
        toks = line.split()
        if len(toks) != width:
            raise ParseError(f"{what}: expected {width} numbers, found {len(toks)}")
        try:
            vals = [float(t) for t in toks]
        except ValueError as exc:
            raise ParseError(f"{what}: {exc}") from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError(f"{what}: non-finite value")
        return vals

    A = np.array([row(body[i], n, f"row {i + 1} of A") for i in range(m)])
    b = np.array(row(body[m], m, "vector b"))
    return A, b


def read_problem(path):
    with open(path) as fh:
        return parse_problem(fh.read())


def format_problem(A, b, comment=None):
    A = np.asarray(A, dtype=float)
    out = []
    if comment:
        out.extend("# " + c for c in comment.splitlines())
    out.append(f"{A.shape[0]} {A.shape[1]}")
    out.extend(" ".join(repr(float(v)) for v in r) for r in A)
    out.append(" ".join(repr(float(v)) for v in np.asarray(b, dtype=float)))
    return "\n".join(out) + "\n"


def _floats(v):
    return None if v is None else [float(x) for x in np.asarray(v, dtype=float)]


def _maybe_float(v):
    return None if v is None else float(v)


def _run_entry(rep):
    return {"name": rep.solver, "iterations": rep.iterations, "objective": rep.objective,
            "grad_norm": rep.grad_norm, "converged": rep.converged}


def certificate_document(cert, rho, identities, reports=()):
    """Build the JSON-ready mapping for a certificate."""
    doc = {"status": cert.status, "rho": float(rho)}
    if isinstance(cert, Feasible):
        doc["x_normal"] = _floats(cert.x_normal)
        doc["normality_guaranteed"] = bool(cert.normality_guaranteed)
    else:
        doc["u_cert"] = _floats(cert.u_cert)
        doc["normality_guaranteed"] = cert.x_star is not None
    doc["identities"] = {"z_residual": _maybe_float(identities.z_identity_residual),
                         "w_identity_residual": _maybe_float(identities.w_identity_residual)}
    # the run whose minimiser produced the certificate is listed first
    runs = [_run_entry(r) for r in reports]
    if isinstance(cert, Feasible) and len(runs) == 2:
        runs.reverse()
    lead = runs[0] if runs else {"iterations": 0, "objective": None, "grad_norm": None}
    doc["solver"] = {"route": cert.route, "iterations": lead["iterations"],
                     "objective": lead["objective"], "grad_norm": lead["grad_norm"],
                     "runs": runs}
    doc["witness"] = {"x_star": _floats(cert.x_star), "z": _floats(cert.z),
                      "u_star": _floats(cert.u_star), "w1": _floats(cert.w1),
                      "w2": _maybe_float(cert.w2)}
    return doc


def dumps_certificate(doc):
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _arr(v):
    return None if v is None else np.array(v, dtype=float)


def loads_certificate(text):
    """Parse a certificate document; returns ``(certificate, rho, document)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"certificate is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("status") not in ("feasible", "infeasible"):
        raise ParseError("certificate status must be 'feasible' or 'infeasible'")
    try:
        rho = float(doc["rho"])
        wit = doc.get("witness") or {}
        route = (doc.get("solver") or {}).get("route", "both")
        common = dict(x_star=_arr(wit.get("x_star")), z=_arr(wit.get("z")),
                      u_star=_arr(wit.get("u_star")), w1=_arr(wit.get("w1")),
                      w2=None if wit.get("w2") is None else float(wit["w2"]), route=route)
        if doc["status"] == "feasible":
            cert = Feasible(x_normal=_arr(doc["x_normal"]),
                            normality_guaranteed=bool(doc.get("normality_guaranteed", False)),
                            **common)
        else:
            cert = Infeasible(u_cert=_arr(doc["u_cert"]), **common)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from None
    return cert, rho, doc
