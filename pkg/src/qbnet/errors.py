"""Exception hierarchy shared by all qbnet modules."""


class QbnError(Exception):
    """Base class for every error raised by qbnet."""

    kind = "error"

    def to_dict(self):
        return {"error": self.kind, "message": str(self)}


class CycleDetected(QbnError):
    kind = "cycle_detected"

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("graph has a directed cycle: " + " -> ".join(map(str, self.cycle)))


class UnknownNode(QbnError):
    kind = "unknown_node"


class OverlappingSets(QbnError):
    kind = "overlapping_sets"


class NetworkSyntaxError(QbnError):
    """Malformed network file. ``line``/``column`` are 1-based when known."""

    kind = "syntax_error"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)

    def to_dict(self):
        out = super().to_dict()
        out["line"] = self.line
        out["column"] = self.column
        return out


class ValidationError(QbnError):
    kind = "validation_error"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))

    def to_dict(self):
        out = super().to_dict()
        out["diagnostics"] = [d.to_dict() for d in self.diagnostics]
        return out


class EmptyCredalSet(QbnError):
    kind = "empty_credal_set"


class DimensionTooLarge(QbnError):
    kind = "dimension_too_large"


class InfeasibleModel(QbnError):
    kind = "infeasible_model"


class ZeroEvidence(QbnError):
    kind = "zero_evidence"


class CombinationCapExceeded(QbnError):
    kind = "combination_cap"


class ReductionNotApplicable(QbnError):
    kind = "reduction_not_applicable"


class UnsupportedSpecification(QbnError):
    kind = "unsupported_specification"


class TooLarge(QbnError):
    kind = "too_large"


class EmptyPolytope(QbnError):
    kind = "empty_polytope"


class AllDenominatorsZero(QbnError):
    kind = "all_denominators_zero"
