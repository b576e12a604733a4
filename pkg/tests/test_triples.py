"""Triple validation, the extended-algebra bracket table, the orthogonal
action, the enlargement order, and orbit comparison.

The one-parameter-isotropy family with parameters (a, b, k) provides the
worked examples: its bracket table is known in closed form, its validity
region is the constraint surface a(k + a^2 + b^2) = ab = 0, and its
enlargement behaviour is known exactly.
"""

import itertools

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanframes.errors import NotClosedError
from cartanframes.liealg import Subspace, fingerprint, random_orthogonal
from cartanframes.threedim import Params3D, admissible, constant_curvature_triple, family_triple
from cartanframes.triples import (
    act_orthogonal,
    canonical_curvature,
    check_leq,
    invariant_signature,
    make_triple,
    orbit_equivalent,
    signature_distance,
    symmetry_algebra,
    torsion,
    validate_triple,
)

GRID = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)

coords = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False)


@pytest.fixture
def sphere_like():
    return family_triple(Params3D(0.0, 1.0, 2.0))


class TestValidateTriple:
    def test_admissible_point_is_valid(self):
        report = validate_triple(family_triple(Params3D(0.0, 1.0, 1.0)))
        assert report.valid
        assert report.worst <= 1e-9

    def test_inadmissible_point_fails_jacobi(self):
        report = validate_triple(family_triple(Params3D(1.0, 1.0, 0.0)))
        assert not report.valid
        assert report.residual("jacobi") >= 1e-3
        # equivariance still holds identically on this family
        assert report.residual("connection_equivariant") <= 1e-12
        assert report.residual("curvature_equivariant") <= 1e-12

    def test_abelian_triple_valid(self):
        t = make_triple(Subspace.zero(3), np.zeros((3, 3, 3)), np.zeros((3, 3, 3)))
        report = validate_triple(t)
        assert report.valid
        alg = symmetry_algebra(t)
        npt.assert_array_equal(alg.constants.c, np.zeros((3, 3, 3)))

    def test_non_finite_entries_rejected(self):
        from cartanframes.errors import ValidationError
        conn = np.zeros((3, 3, 3))
        conn[0, 0, 1] = np.nan
        conn[0, 1, 0] = np.nan
        with pytest.raises(ValidationError, match="finite"):
            make_triple(Subspace.zero(3), conn, np.zeros((3, 3, 3)))

    def test_constraint_surface_matches_grid(self):
        # validity of the built triple is equivalent to admissibility
        for a, b, k in itertools.product(GRID, GRID, GRID):
            p = Params3D(a, b, k)
            report = validate_triple(family_triple(p))
            if admissible(p).ok:
                assert report.valid, p
            else:
                assert report.residual("jacobi") >= 1e-3, p

    def test_random_vector_spot_checks_agree_with_basis_checks(self, rng, sphere_like):
        # equivariance residuals are bilinear, so basis checks imply the rest
        t = sphere_like
        xi = t.isotropy.basis[0]
        for _ in range(25):
            x = rng.standard_normal(3)
            from cartanframes.triples import connection_value
            lhs = connection_value(t, xi @ x)
            rhs = xi @ connection_value(t, x) - connection_value(t, x) @ xi
            npt.assert_allclose(lhs, rhs, atol=1e-12)


class TestBracketTable:
    def test_family_brackets_match_known_table(self):
        # b = 1, k = 1: [e1,e2] = -2 e3 - 2 xi, [e1,e3] = e2, [e2,e3] = -e1,
        # [xi, e1] = -e2, [xi, e2] = e1, [xi, e3] = 0
        alg = symmetry_algebra(family_triple(Params3D(0.0, 1.0, 1.0)))
        c = alg.constants.c
        assert c[3, 1, 2] == pytest.approx(-2.0)
        assert c[0, 1, 2] == pytest.approx(-2.0)
        assert c[2, 1, 3] == pytest.approx(1.0)
        assert c[1, 2, 3] == pytest.approx(-1.0)
        assert c[2, 0, 1] == pytest.approx(-1.0)
        assert c[1, 0, 2] == pytest.approx(1.0)
        npt.assert_allclose(c[:, 0, 3], 0.0, atol=1e-12)

    def test_full_isotropy_unit_curvature_is_compact_six_dimensional(self):
        alg = symmetry_algebra(constant_curvature_triple(1.0))
        fp = fingerprint(alg.constants)
        assert fp.dim == 6
        assert fp.killing_signature == (0, 6, 0)

    def test_isotropy_not_closed_raises(self, f_basis3):
        f12, f13, _ = f_basis3
        bad = Subspace.from_matrices([f12, f13])
        with pytest.raises(NotClosedError):
            symmetry_algebra(make_triple(bad, np.zeros((3, 3, 3)), np.zeros((3, 3, 3))))


class TestTorsionAndCurvaturePart:
    def test_zero_connection_means_zero_torsion(self, rng):
        t = constant_curvature_triple(1.0)
        x, y = rng.standard_normal(3), rng.standard_normal(3)
        npt.assert_allclose(torsion(t, x, y), 0.0, atol=1e-15)

    def test_family_torsion_value(self):
        # connection sends e1 -> b f23 and e3 -> 0, so T(e1, e3) = -b e2
        t = family_triple(Params3D(0.0, 1.0, 1.0))
        npt.assert_allclose(torsion(t, [1, 0, 0], [0, 0, 1]), [0.0, -1.0, 0.0], atol=1e-15)

    @given(x=st.tuples(coords, coords, coords))
    @settings(max_examples=30, deadline=None)
    def test_torsion_vanishes_on_diagonal(self, x):
        t = family_triple(Params3D(0.0, 1.0, 2.0))
        npt.assert_allclose(torsion(t, x, x), 0.0, atol=1e-9)

    def test_curvature_part_of_family(self, f_basis3):
        # value (k + b^2) f12 on the (e1, e2) plane
        f12 = f_basis3[0]
        t = family_triple(Params3D(0.0, 1.0, 2.0))
        npt.assert_allclose(canonical_curvature(t, [1, 0, 0], [0, 1, 0]), 3 * f12, atol=1e-12)

    def test_zero_connection_curvature_part_is_curvature(self, rng):
        t = constant_curvature_triple(0.5)
        from cartanframes.triples import curvature_value
        x, y = rng.standard_normal(3), rng.standard_normal(3)
        npt.assert_allclose(
            canonical_curvature(t, x, y), curvature_value(t, x, y), atol=1e-12
        )


class TestOrthogonalAction:
    def test_identity_fixes_triple(self, sphere_like):
        t2 = act_orthogonal(sphere_like, np.eye(3))
        npt.assert_array_equal(t2.connection, sphere_like.connection)
        npt.assert_array_equal(t2.curvature, sphere_like.curvature)

    def test_right_action_law(self, rng, sphere_like):
        for _ in range(10):
            q1 = random_orthogonal(3, rng)
            q2 = random_orthogonal(3, rng)
            via_two = act_orthogonal(act_orthogonal(sphere_like, q1), q2)
            direct = act_orthogonal(sphere_like, q1 @ q2)
            npt.assert_allclose(via_two.connection, direct.connection, atol=1e-9)
            npt.assert_allclose(via_two.curvature, direct.curvature, atol=1e-9)

    def test_action_preserves_validity_and_signature(self, rng, sphere_like):
        sig0 = invariant_signature(sphere_like)
        for _ in range(10):
            q = random_orthogonal(3, rng)
            moved = act_orthogonal(sphere_like, q)
            assert validate_triple(moved).valid
            assert signature_distance(sig0, invariant_signature(moved)) <= 1e-8

    def test_plane_rotation_keeps_signature(self, sphere_like):
        theta = 0.7
        q = np.array([
            [np.cos(theta), -np.sin(theta), 0.0],
            [np.sin(theta), np.cos(theta), 0.0],
            [0.0, 0.0, 1.0],
        ])
        sig0 = invariant_signature(sphere_like)
        sig1 = invariant_signature(act_orthogonal(sphere_like, q))
        assert signature_distance(sig0, sig1) <= 1e-12

    def test_non_orthogonal_rejected(self, sphere_like):
        with pytest.raises(ValueError):
            act_orthogonal(sphere_like, np.eye(3) * 2.0)

    def test_action_preserves_invalidity(self, rng):
        # the transformed triple is valid exactly when the input is
        bad = family_triple(Params3D(1.0, 1.0, 0.0))
        jac0 = validate_triple(bad).residual("jacobi")
        moved = act_orthogonal(bad, random_orthogonal(3, rng))
        jac1 = validate_triple(moved).residual("jacobi")
        assert jac1 == pytest.approx(jac0, abs=1e-9)
        assert jac1 >= 1e-3


class TestEnlargementOrder:
    def test_reflexive_with_empty_witness(self, sphere_like):
        assert check_leq(sphere_like, sphere_like, Subspace.zero(3)).holds

    def test_hyperbolic_reduction(self, f_basis3):
        _, f13, f23 = f_basis3
        t1 = family_triple(Params3D(1.0, 0.0, -1.0))
        t2 = constant_curvature_triple(-1.0)
        result = check_leq(t1, t2, Subspace.from_matrices([f13, f23]))
        assert result.holds
        assert result.witness.embedding_residual <= 1e-9

    def test_round_sphere_reduction(self, f_basis3):
        _, f13, f23 = f_basis3
        t1 = family_triple(Params3D(0.0, 1.0, 1.0))  # k = b^2
        result = check_leq(t1, constant_curvature_triple(1.0),
                           Subspace.from_matrices([f13, f23]))
        assert result.holds

    def test_product_metric_spurious_enlargement_rejected(self, f_basis3):
        # conditions (i)-(iii) hold but the inclusion is not a homomorphism
        _, f13, f23 = f_basis3
        t1 = family_triple(Params3D(0.0, 0.0, 1.0))
        result = check_leq(t1, constant_curvature_triple(1.0),
                           Subspace.from_matrices([f13, f23]))
        assert not result.holds
        by_name = {c.name: c for c in result.checks}
        assert by_name["isotropy_splits"].passed
        assert by_name["connection_restricts"].passed
        assert by_name["curvature_restricts"].passed
        assert by_name["inclusion_homomorphism"].residual >= 1e-3

    def test_transitivity_along_the_implemented_chain(self, f_basis3):
        _, f13, f23 = f_basis3
        witness = Subspace.from_matrices([f13, f23])
        t1 = family_triple(Params3D(1.0, 0.0, -1.0))
        t2 = constant_curvature_triple(-1.0)
        assert check_leq(t1, t2, witness).holds
        assert check_leq(t2, t2, Subspace.zero(3)).holds
        # composing the two witnesses (second is empty) keeps the order
        assert check_leq(t1, t2, witness).holds

    def test_witness_must_be_orthogonal_to_smaller_isotropy(self, f_basis3, sphere_like):
        f12 = f_basis3[0]
        with pytest.raises(ValueError):
            check_leq(sphere_like, constant_curvature_triple(2.0),
                      Subspace.from_matrices([f12]))


class TestInvariantSignature:
    def test_family_entries(self, sphere_like):
        sig = invariant_signature(sphere_like)
        assert sig.n == 3
        assert sig.isotropy_dim == 1
        assert sig.connection_energy == pytest.approx(2.0)   # 2 b^2, b = 1
        assert sig.curvature_energy == pytest.approx(4.0)    # k^2, k = 2
        npt.assert_allclose(sig.stretch_spectrum, (1.0, 1.0, 2.0), atol=1e-12)

    def test_abelian_entries_vanish(self):
        t = make_triple(Subspace.zero(3), np.zeros((3, 3, 3)), np.zeros((3, 3, 3)))
        sig = invariant_signature(t)
        assert sig.connection_energy == 0.0
        assert sig.curvature_energy == 0.0
        npt.assert_allclose(sig.stretch_spectrum, 0.0, atol=1e-15)

    def test_invariance_over_many_rotations(self, rng):
        t = family_triple(Params3D(0.0, 1.5, -0.5))
        sig0 = invariant_signature(t)
        worst = max(
            signature_distance(sig0, invariant_signature(act_orthogonal(t, random_orthogonal(3, rng))))
            for _ in range(100)
        )
        assert worst <= 1e-8


class TestOrbitEquivalence:
    def test_constructed_mate_recovered(self, rng, sphere_like):
        mate = act_orthogonal(sphere_like, random_orthogonal(3, rng))
        verdict = orbit_equivalent(sphere_like, mate, seed=11)
        assert verdict.kind == "equivalent"
        assert verdict.residual <= 1e-9
        # the witness actually transports one triple onto the other
        moved = act_orthogonal(sphere_like, verdict.witness)
        npt.assert_allclose(moved.connection, mate.connection, atol=1e-7)

    def test_different_parameters_distinct(self):
        verdict = orbit_equivalent(
            family_triple(Params3D(0.0, 1.0, 2.0)),
            family_triple(Params3D(0.0, 1.0, -0.5)),
            seed=11,
        )
        assert verdict.kind == "distinct"

    def test_self_equivalent_with_identity_witness(self, sphere_like):
        # the identity is the first seed, so the zero-residual witness is I
        verdict = orbit_equivalent(sphere_like, sphere_like, seed=0)
        assert verdict.kind == "equivalent"
        npt.assert_allclose(verdict.witness, np.eye(3), atol=1e-9)

    def test_never_equivalent_without_witness(self, sphere_like, rng):
        verdict = orbit_equivalent(sphere_like, act_orthogonal(sphere_like, random_orthogonal(3, rng)), seed=2)
        if verdict.kind == "equivalent":
            assert verdict.witness is not None
