"""cartanframes: adapted-frame classification of Riemannian homogeneous spaces.

The package mechanizes the classical moving-frame pipeline: canonical
o(n) linear algebra, Cartan triples with their extended symmetry
algebras and orthogonal-orbit comparison, curvature of invariant frames
with an independent Koszul oracle, and the complete classification of
the 3D family with one-dimensional isotropy.
"""

__version__ = "0.1.0"

from .errors import (
    NotClosedError,
    NotLieAlgebraError,
    SchemaError,
    ValidationError,
)
from .frames import (
    Coframe3Sphere,
    ConnectionCoefficients,
    CurvatureTensor,
    KoszulCurvature,
    MilnorMetric,
    connection_coefficients,
    curvature_from_structure,
    curvature_sign_calibration,
    koszul_curvature,
    milnor_metric,
    ricci_from_curvature,
    sphere_coframe,
    sphere_structure_constants,
)
from .liealg import (
    AlgebraFingerprint,
    StructureConstants,
    Subspace,
    commutator,
    fingerprint,
    jacobi_residual,
    matrix_unit,
    ortho_complement,
    project,
    random_orthogonal,
    rotation_generator,
    so_basis,
    structure_constants,
    trace_inner,
)
from .threedim import (
    GeometryReport,
    Params3D,
    TransverseSubalgebra,
    admissible,
    classify,
    constant_curvature_triple,
    enlarge_3d,
    family_triple,
    ricci_closed_form,
    transverse_subalgebra,
    wedge_form,
)
from .tolerances import DEFAULT_TOL, resolve_tol
from .triples import (
    CartanTriple,
    EnlargementWitness,
    OrbitVerdict,
    SymmetryAlgebra,
    TripleSignature,
    act_orthogonal,
    canonical_curvature,
    check_leq,
    invariant_signature,
    make_triple,
    orbit_equivalent,
    symmetry_algebra,
    torsion,
    validate_triple,
)

__all__ = [name for name in dir() if not name.startswith("_")]
