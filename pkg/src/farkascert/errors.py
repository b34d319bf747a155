"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class FarkasError(Exception):
    code = "E_INTERNAL"


class NonFiniteInput(FarkasError, ValueError):
    code = "E_NONFINITE"


class DimensionMismatch(FarkasError, ValueError):
    code = "E_DIMENSION"


class ZeroRhs(FarkasError, ValueError):
    code = "E_ZERO_RHS"


class RankDeficient(FarkasError):
    code = "E_RANK"

    def __init__(self, rank, m):
        super().__init__(f"rank {rank} < m={m}")
        self.rank = rank
        self.m = m


class MaxIterExceeded(FarkasError):
    code = "E_NONCONVERGENCE"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InconsistentRoutes(FarkasError):
    code = "E_INCONSISTENT_ROUTES"

    def __init__(self, message, reports=()):
        super().__init__(message)
        self.reports = tuple(reports)


class CertificateInvalid(FarkasError):
    code = "E_CERT_INVALID"

    def __init__(self, clause, detail=""):
        msg = f"certificate clause violated: {clause}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.clause = clause


class ZeroResidual(FarkasError):
    code = "E_ZERO_RESIDUAL"


class NotInSolutionSet(FarkasError):
    code = "E_NOT_IN_SOLUTION_SET"


class NotInRange(FarkasError):
    code = "E_NOT_IN_RANGE"


class DiagramViolation(FarkasError):
    code = "E_DIAGRAM"

    def __init__(self, edge, detail=""):
        super().__init__(f"diagram edge violated: {edge}" + (f" ({detail})" if detail else ""))
        self.edge = edge


class BudgetExceeded(FarkasError):
    code = "E_BUDGET"


class ParseError(FarkasError, ValueError):
    code = "E_PARSE"
