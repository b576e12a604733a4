"""Canonical-basis conventions, the trace inner product, splittings,
structure constants, and fingerprints, checked against independent
matrix-multiplication oracles."""

import numpy as np
import numpy.testing as npt
import pytest

from cartanframes.errors import NotClosedError, NotLieAlgebraError, ValidationError
from cartanframes.liealg import (
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
    so_pairs,
    structure_constants,
    trace_inner,
)

# epsilon-pattern constants of the compact 3D algebra
EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k, _s in [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1),
                       (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)]:
    EPSILON[_i, _j, _k] = _s


def _violating_constants():
    c = np.zeros((3, 3, 3))
    c[2, 0, 1] = 1.0   # [b1, b2] = b3
    c[2, 1, 0] = -1.0
    c[0, 0, 2] = 1.0   # [b1, b3] = b1
    c[0, 2, 0] = -1.0
    return c


class TestMatrixUnit:
    def test_maps_ith_vector_to_jth(self):
        m = matrix_unit(3, 2, 1)
        npt.assert_array_equal(m @ np.array([0.0, 1.0, 0.0]), [1.0, 0.0, 0.0])
        npt.assert_array_equal(m @ np.array([1.0, 0.0, 0.0]), [0.0, 0.0, 0.0])

    def test_diagonal_case(self):
        m = matrix_unit(2, 1, 1)
        npt.assert_array_equal(m @ np.array([1.0, 0.0]), [1.0, 0.0])
        npt.assert_array_equal(m @ np.array([0.0, 1.0]), [0.0, 0.0])

    def test_commutator_by_direct_multiplication(self):
        # independent oracle: plain numpy products of literal arrays
        e12 = np.zeros((3, 3)); e12[1, 0] = 1.0   # matrix_unit(3, 1, 2)
        e31 = np.zeros((3, 3)); e31[0, 2] = 1.0   # matrix_unit(3, 3, 1)
        expected = e12 @ e31 - e31 @ e12
        got = commutator(matrix_unit(3, 1, 2), matrix_unit(3, 3, 1))
        npt.assert_allclose(got, expected)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            matrix_unit(3, 0, 1)
        with pytest.raises(ValueError):
            matrix_unit(3, 1, 4)


class TestRotationGenerator:
    def test_action_on_basis(self):
        f = rotation_generator(3, 1, 2)
        npt.assert_array_equal(f @ np.eye(3)[0], [0.0, -1.0, 0.0])
        npt.assert_array_equal(f @ np.eye(3)[1], [1.0, 0.0, 0.0])
        npt.assert_array_equal(f @ np.eye(3)[2], [0.0, 0.0, 0.0])

    @pytest.mark.parametrize("n", range(2, 7))
    def test_skew(self, n):
        for j, i in so_pairs(n):
            f = rotation_generator(n, j, i)
            npt.assert_array_equal(f.T, -f)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_orthonormal_under_trace_inner(self, n):
        basis = so_basis(n)
        gram = np.array([[trace_inner(x, y) for y in basis] for x in basis])
        npt.assert_allclose(gram, np.eye(len(basis)), atol=1e-12)

    def test_bad_plane(self):
        with pytest.raises(ValueError):
            rotation_generator(3, 2, 2)
        with pytest.raises(ValueError):
            rotation_generator(3, 3, 1)


class TestCommutator:
    def test_o3_table(self, f_basis3):
        f12, f13, f23 = f_basis3
        npt.assert_allclose(commutator(f12, f13), -f23)
        npt.assert_allclose(commutator(f12, f23), f13)
        npt.assert_allclose(commutator(f13, f23), -f12)

    def test_self_bracket_vanishes(self, rng):
        x = rng.standard_normal((4, 4))
        npt.assert_array_equal(commutator(x, x), np.zeros((4, 4)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            commutator(np.eye(2), np.eye(3))


class TestTraceInner:
    def test_generator_norm_one(self, f_basis3):
        # tr((E12 - E21)^2) = -2, so the inner product is 1
        assert trace_inner(f_basis3[0], f_basis3[0]) == pytest.approx(1.0)

    def test_distinct_generators_orthogonal(self, f_basis3):
        assert trace_inner(f_basis3[0], f_basis3[1]) == pytest.approx(0.0)

    def test_linear_in_zero(self, rng):
        x = rng.standard_normal((3, 3))
        assert trace_inner(np.zeros((3, 3)), x) == 0.0


class TestSubspaceSplit:
    def test_complement_of_one_generator(self, f_basis3):
        f12, f13, f23 = f_basis3
        comp = ortho_complement(Subspace.from_matrices([f12]))
        assert comp.dim == 2
        assert comp.membership_residual(f13) <= 1e-12
        assert comp.membership_residual(f23) <= 1e-12

    def test_complement_of_full_space(self, so3):
        assert ortho_complement(so3).dim == 0

    def test_complement_of_zero(self):
        comp = ortho_complement(Subspace.zero(4))
        assert comp.dim == 6

    def test_project_splits(self, f_basis3):
        f12, f13, _ = f_basis3
        xg, xperp = project(f13 + 2 * f12, Subspace.from_matrices([f12]))
        npt.assert_allclose(xg, 2 * f12, atol=1e-12)
        npt.assert_allclose(xperp, f13, atol=1e-12)

    def test_project_full_and_zero(self, so3, rng):
        x = so3.basis[0] + 0.5 * so3.basis[2]
        xg, xperp = project(x, so3)
        npt.assert_allclose(xg, x, atol=1e-12)
        npt.assert_allclose(xperp, 0 * x, atol=1e-12)
        xg, xperp = project(x, Subspace.zero(3))
        npt.assert_allclose(xg, 0 * x, atol=1e-12)
        npt.assert_allclose(xperp, x, atol=1e-12)

    def test_project_recombines_random_skew(self, rng, so3):
        for _ in range(20):
            m = rng.standard_normal((3, 3))
            x = m - m.T
            sub = Subspace.from_matrices([so3.basis[0] + so3.basis[1]])
            xg, xperp = project(x, sub)
            npt.assert_allclose(xg + xperp, x, atol=1e-12)
            assert abs(trace_inner(xperp, sub.basis[0])) <= 1e-12

    def test_non_skew_rejected(self, so3):
        with pytest.raises(ValidationError):
            project(np.eye(3), so3)
        with pytest.raises(ValidationError):
            Subspace.from_matrices([np.eye(3)])

    def test_dependent_basis_rejected(self, f_basis3):
        with pytest.raises(ValidationError):
            Subspace.from_matrices([f_basis3[0], 2 * f_basis3[0]])


class TestStructureConstants:
    def test_o3_totally_antisymmetric_unit_pattern(self, f_basis3):
        sc = structure_constants(list(f_basis3))
        c = sc.c
        # |c| = 1 on the alternating pattern, totally antisymmetric
        npt.assert_allclose(c, -EPSILON, atol=1e-12)
        npt.assert_allclose(c + np.swapaxes(c, 0, 1), 0, atol=1e-12)

    def test_reconstruction_matches_commutators(self, rng):
        basis = so_basis(4)
        sc = structure_constants(list(basis))
        for j in range(len(basis)):
            for k in range(len(basis)):
                rebuilt = np.einsum("i,iab->ab", sc.c[:, j, k], basis)
                npt.assert_allclose(rebuilt, commutator(basis[j], basis[k]), atol=1e-12)

    def test_singleton_is_abelian(self, f_basis3):
        sc = structure_constants([f_basis3[0]])
        npt.assert_array_equal(sc.c, np.zeros((1, 1, 1)))

    def test_not_closed_raises_with_residual(self, f_basis3):
        f12, f13, _ = f_basis3
        with pytest.raises(NotClosedError) as info:
            structure_constants([f12, f13])
        assert info.value.residual > 1e-3  # [f12, f13] = -f23 escapes the span


class TestJacobiResidual:
    def test_genuine_algebras_pass(self, f_basis3):
        assert jacobi_residual(structure_constants(list(f_basis3))) <= 1e-12
        assert jacobi_residual(structure_constants(list(so_basis(4)))) <= 1e-12
        assert jacobi_residual(structure_constants([f_basis3[0]])) == 0.0

    def test_abelian_zero(self):
        assert jacobi_residual(np.zeros((3, 3, 3))) == 0.0

    def test_two_entry_tables_can_still_satisfy_jacobi(self):
        # [b2, b3] = b1 and [b3, b1] = b2 close into the plane Euclidean
        # algebra: every cyclic sum collapses, residual exactly zero
        c = np.zeros((3, 3, 3))
        c[0, 1, 2] = 1.0
        c[0, 2, 1] = -1.0
        c[1, 2, 0] = 1.0
        c[1, 0, 2] = -1.0
        assert jacobi_residual(c) == 0.0

    def test_violation_detected_by_brute_force(self):
        # [b1, b2] = b3 and [b1, b3] = b1 break the cyclic sum on (b1,b2,b3)
        c = _violating_constants()
        # brute-force expansion of the cyclic sum through the table
        def bracket(x, y):
            return np.einsum("ijk,j,k->i", c, x, y)
        worst = 0.0
        eye = np.eye(3)
        for x in eye:
            for y in eye:
                for z in eye:
                    s = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) \
                        + bracket(bracket(z, x), y)
                    worst = max(worst, float(np.linalg.norm(s)))
        assert worst > 0.1
        assert jacobi_residual(c) == pytest.approx(worst, abs=1e-12)


class TestFingerprint:
    def test_compact_pattern(self):
        fp = fingerprint(EPSILON)
        assert fp == fingerprint(EPSILON)  # deterministic
        assert (fp.dim, fp.killing_signature) == (3, (0, 3, 0))
        assert (fp.center_dim, fp.derived_dim, fp.unimodular) == (0, 3, True)

    def test_abelian(self):
        fp = fingerprint(np.zeros((3, 3, 3)))
        assert fp.killing_signature == (0, 0, 3)
        assert fp.center_dim == 3
        assert fp.derived_dim == 0

    def test_non_lie_rejected(self):
        with pytest.raises(NotLieAlgebraError):
            fingerprint(_violating_constants())

    def test_invariant_under_basis_change(self, rng):
        base = structure_constants(list(so_basis(3))).c
        fp0 = fingerprint(base)
        for _ in range(10):
            p = rng.standard_normal((3, 3))
            while abs(np.linalg.det(p)) < 0.3:
                p = rng.standard_normal((3, 3))
            pinv = np.linalg.inv(p)
            changed = np.einsum("di,ijk,ja,kb->dab", pinv, base, p, p)
            assert fingerprint(changed) == fp0


class TestRandomOrthogonal:
    def test_orthogonality(self, rng):
        for n in (2, 3, 5):
            q = random_orthogonal(n, rng)
            npt.assert_allclose(q.T @ q, np.eye(n), atol=1e-12)
