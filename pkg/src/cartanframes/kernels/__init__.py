"""Hot numerical kernels, with a compiled core when available.

The Cython extension ``_speedups`` is built at install time; if it is
missing (no compiler, source checkout without build) or disabled via the
``CARTANFRAMES_DISABLE_SPEEDUPS=1`` environment variable, the pure-NumPy
implementation takes over with identical semantics.
"""

import os

from . import _numpy

COMPILED = False
_impl = _numpy
if os.environ.get("CARTANFRAMES_DISABLE_SPEEDUPS") != "1":
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        pass

conjugate_stack = _impl.conjugate_stack
act_triple = _impl.act_triple
span_projector = _impl.span_projector
orbit_residual = _impl.orbit_residual
jacobi_residual_max = _impl.jacobi_residual_max


def backend_name() -> str:
    return "compiled" if COMPILED else "numpy"
