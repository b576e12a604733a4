"""Tolerance policy shared by every numerical check in the package.

A single default drives membership/residual decisions; eigenvalue
zero-classification gets a looser threshold because signature
eigenproblems amplify rounding error.  The ``CARTAN_TOL`` environment
variable, when set to a positive real, overrides the default everywhere.
"""

import os

DEFAULT_TOL = 1e-9
EIGENVALUE_TOL = 1e-7

ENV_VAR = "CARTAN_TOL"


def resolve_tol(tol: float | None = None) -> float:
    """Tolerance in force: explicit argument > CARTAN_TOL > default."""
    if tol is not None:
        value = float(tol)
        if value <= 0:
            raise ValueError(f"tolerance must be positive, got {value}")
        return value
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            value = float(raw)
        except ValueError:
            return DEFAULT_TOL
        if value > 0:
            return value
    return DEFAULT_TOL
