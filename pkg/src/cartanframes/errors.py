"""Exception hierarchy.

Plain ``ValueError`` is used for argument errors (bad indices, shape
mismatches, non-orthogonal matrices).  The classes below mark failures of
mathematical invariants, which the CLI maps to its own exit code.
"""


class ValidationError(ValueError):
    """A structural or mathematical invariant failed at tolerance."""


class NotClosedError(ValidationError):
    """A set of matrices is not closed under the commutator."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NotLieAlgebraError(ValidationError):
    """Structure constants violate the Jacobi identity."""


class SchemaError(ValueError):
    """An on-disk document does not match its schema; names the bad field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
