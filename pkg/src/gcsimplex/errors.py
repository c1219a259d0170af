"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class ModelError(ValueError):
    """Base class for validation failures of the three-state model."""


class OutsideSimplex(ModelError):
    pass


class InvalidWeights(ModelError):
    pass


class InconsistentReference(ModelError):
    pass


class SignMismatch(ModelError):
    pass


class SideMismatch(ModelError):
    pass


class BoundaryTooClose(ModelError):
    pass


class DomainError(ModelError):
    """Invalid domain data. Carries the offending label."""

    def __init__(self, label: str, message: str):
        super().__init__(f"{label}: {message}")
        self.label = label


class NonPositiveIonization(DomainError):
    pass


class ElectronCountUnderflow(DomainError):
    pass


class ConvexityWarning(UserWarning):
    """|A^q| >= I^q: the domain violates the usual convexity ordering."""


# ensemble oracle

class OracleError(ValueError):
    pass


class WeightSumError(OracleError):
    pass


class UnknownSector(OracleError):
    pass


class DimensionMismatch(OracleError):
    pass


# catalog I/O

class CatalogError(ValueError):
    pass


class ParseError(CatalogError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


class DuplicateLabel(ParseError):
    pass


class MissingField(ParseError):
    pass


class ModeConflict(ParseError):
    pass
