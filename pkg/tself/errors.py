"""
tself.errors - exception hierarchy
==================================

Library code raises these; the CLI turns them into click exceptions with
exit codes (see tself.cli).
"""


class TselfError(Exception):
    """Base class for every error raised by tself."""


class DomainError(TselfError, ValueError):
    """Argument outside the domain of a tempered or hyperbolic operation."""


class QuadratureError(TselfError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error≈{error:.3g})")
        self.estimate = estimate
        self.error = error


class DataError(TselfError, ValueError):
    """Unusable dataset: parse errors, bad labels, too few examples."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.row = row
        self.column = column


class ArtifactError(TselfError, ValueError):
    """A JSON artifact has the wrong format or schema version."""


__all__ = ["TselfError", "DomainError", "QuadratureError", "DataError", "ArtifactError"]
