import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegals.subspaces import (
    AffineSubspace,
    Subspace,
    apply_operator,
    eigenspace_split,
    index_of_invariance,
    invariant_closure,
    krylov,
    normal_representation,
    orthogonal_complement,
    strongly_orthogonal,
    subspace_intersect,
    subspace_sum,
    subspaces_equal,
)


def span(*vectors):
    return Subspace.from_vectors([np.asarray(v, dtype=float) for v in vectors])


class TestSubspaceType:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            Subspace(np.array([[1.0], [1.0]]))

    def test_zero_subspace(self):
        z = Subspace.zero(3)
        assert z.dim == 0 and z.ambient_dim == 3
        assert z.contains(np.zeros(3))

    def test_projector(self):
        s = span([1, 0, 0])
        np.testing.assert_allclose(s.projector(), np.diag([1.0, 0.0, 0.0]))


class TestSumIntersectComplement:
    def test_sum_of_axes(self):
        s = subspace_sum(span([1, 0, 0]), span([0, 1, 0]))
        assert s.dim == 2

    def test_intersect_with_complement_is_trivial(self):
        s = span([1, 2, 0], [0, 1, 1])
        assert subspace_intersect(s, orthogonal_complement(s)).dim == 0

    def test_plane_intersection(self):
        s = subspace_intersect(span([1, 0, 0], [0, 1, 0]), span([0, 1, 0], [0, 0, 1]))
        assert s.dim == 1
        assert subspaces_equal(s, span([0, 1, 0]))

    def test_complement_dimension(self):
        s = span([1, 1, 1, 1])
        c = orthogonal_complement(s)
        assert c.dim == 3
        assert np.linalg.norm(c.basis.conj().T @ s.basis) <= 1e-12

    def test_complement_of_zero(self):
        assert orthogonal_complement(Subspace.zero(4)).dim == 4

    def test_ambient_mismatch(self):
        with pytest.raises(ValueError):
            subspace_sum(span([1, 0]), span([1, 0, 0]))


class TestKrylov:
    def test_identity_operator(self):
        s = krylov(np.eye(4), np.array([1.0, 2.0, 0.0, 1.0]), 5)
        assert s.dim == 1

    def test_two_distinct_modes(self):
        # (1,1) and (1,2) are independent
        s = krylov(np.diag([1.0, 2.0]), np.array([1.0, 1.0]), 2)
        assert s.dim == 2

    def test_two_modes_in_three_dims(self):
        # the third coordinate of b is zero, so powers stay in a plane
        s = krylov(np.diag([1.0, 2.0, 3.0]), np.array([1.0, 1.0, 0.0]), 3)
        assert s.dim == 2

    def test_zero_seed(self):
        s = krylov(np.eye(3), np.zeros(3), 4)
        assert s.dim == 0

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            krylov(np.eye(2), np.ones(2), 0)


class TestIndexOfInvariance:
    def test_identity_is_invariant(self):
        for p in (1, 2):
            s = span(*np.eye(3)[:, :p].T)
            assert index_of_invariance(np.eye(3), s) == 0

    def test_krylov_index_is_one(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((6, 6))
        a = 0.5 * (a + a.T) + 6 * np.eye(6)
        s = krylov(a, rng.standard_normal(6), 3)
        assert index_of_invariance(a, s) == 1

    def test_two_by_two(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        assert index_of_invariance(a, span([1, 0])) == 1

    def test_zero_subspace(self):
        assert index_of_invariance(np.eye(3), Subspace.zero(3)) == 0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 9), st.booleans())
    def test_bounds(self, seed, n, complex_field):
        rng = np.random.default_rng(seed)
        p = int(rng.integers(1, n))
        raw = rng.standard_normal((n, p))
        a = rng.standard_normal((n, n))
        if complex_field:
            raw = raw + 1j * rng.standard_normal((n, p))
            a = a + 1j * rng.standard_normal((n, n))
        s = Subspace.from_vectors(raw)
        q = index_of_invariance(a, s)
        assert 0 <= q <= min(s.dim, n - s.dim)


class TestInvariantClosure:
    def test_invariant_start(self):
        chain, j = invariant_closure(np.diag([1.0, 2.0, 3.0]), span([1, 0, 0]))
        assert j == 0 and len(chain) == 1

    def test_krylov_closure_fills_space(self):
        a = np.diag([1.0, 2.0, 3.0])
        s = krylov(a, np.array([1.0, 1.0, 1.0]), 2)
        chain, j = invariant_closure(a, s)
        assert j == 1
        assert chain[-1].dim == 3

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 8))
    def test_indices_non_increasing(self, seed, n):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n))
        s = Subspace.from_vectors(rng.standard_normal((n, int(rng.integers(1, n)))))
        chain, j = invariant_closure(a, s)
        indices = [index_of_invariance(a, member) for member in chain]
        assert indices[-1] == 0
        assert all(indices[i] >= indices[i + 1] for i in range(len(indices) - 1))


class TestNormalRepresentation:
    def test_point_inside_direction(self):
        aff = normal_representation(np.array([2.0, 0.0]), span([1, 0]))
        np.testing.assert_allclose(aff.x0, [0.0, 0.0], atol=1e-15)

    def test_drop_direction_component(self):
        aff = normal_representation(np.array([5.0, 3.0]), span([1, 0]))
        np.testing.assert_allclose(aff.x0, [0.0, 3.0], atol=1e-15)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 8))
    def test_projection_shrinks_norm(self, seed, n):
        rng = np.random.default_rng(seed)
        direction = Subspace.from_vectors(rng.standard_normal((n, int(rng.integers(1, n)))))
        raw = rng.standard_normal(n)
        aff = normal_representation(raw, direction)
        assert np.linalg.norm(aff.x0) <= np.linalg.norm(raw) + 1e-12

    def test_affine_rejects_misaligned_anchor(self):
        with pytest.raises(ValueError):
            AffineSubspace(np.array([1.0, 0.0]), span([1, 0]))


class TestEigenspaceSplit:
    def test_identity_single_block(self):
        split = eigenspace_split(np.eye(4))
        assert len(split.blocks) == 1
        lam, q = split.blocks[0]
        assert lam == pytest.approx(1.0) and q.shape == (4, 4)

    def test_repeated_eigenvalue(self):
        split = eigenspace_split(np.diag([1.0, 1.0, 2.0]))
        lams = split.eigenvalues
        dims = [q.shape[1] for _, q in split.blocks]
        assert lams == pytest.approx([2.0, 1.0])
        assert dims == [1, 2]

    def test_two_by_two_eigenvectors(self):
        split = eigenspace_split(np.array([[2.0, 1.0], [1.0, 2.0]]))
        (lam1, q1), (lam2, q2) = split.blocks
        assert (lam1, lam2) == pytest.approx((3.0, 1.0))
        np.testing.assert_allclose(np.abs(q1[:, 0]), np.ones(2) / np.sqrt(2), atol=1e-14)
        np.testing.assert_allclose(np.abs(q2[:, 0]), np.ones(2) / np.sqrt(2), atol=1e-14)

    def test_blocks_span_everything(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((7, 7))
        a = 0.5 * (a + a.T)
        split = eigenspace_split(a)
        assert sum(q.shape[1] for _, q in split.blocks) == 7
        assert all(x > y for x, y in zip(split.eigenvalues, split.eigenvalues[1:]))
        stacked = np.hstack([q for _, q in split.blocks])
        np.testing.assert_allclose(stacked.conj().T @ stacked, np.eye(7), atol=1e-12)


class TestStrongOrthogonality:
    def test_different_eigenspaces(self):
        split = eigenspace_split(np.diag([1.0, 2.0]))
        assert strongly_orthogonal(np.array([1.0, 0.0]), np.array([0.0, 1.0]), split)

    def test_self_not_strongly_orthogonal(self):
        split = eigenspace_split(np.diag([1.0, 2.0]))
        v = np.array([1.0, 1.0])
        assert not strongly_orthogonal(v, v, split)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.integers(2, 7))
    def test_strong_implies_plain(self, seed, n):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n))
        a = 0.5 * (a + a.T)
        split = eigenspace_split(a)
        # build a strongly orthogonal pair: per block, u gets one random
        # direction and v one orthogonal to it
        u = np.zeros(n)
        v = np.zeros(n)
        for _, q in split.blocks:
            k = q.shape[1]
            cu = rng.standard_normal(k)
            u = u + q @ cu
            if k >= 2:
                cv = rng.standard_normal(k)
                cv -= cu * (cu @ cv) / (cu @ cu)
                v = v + q @ cv
        assert strongly_orthogonal(u, v, split)
        assert abs(np.vdot(u, v)) <= 1e-10 * max(1.0, np.linalg.norm(u) * np.linalg.norm(v))


class TestShiftAndInverseInvariance:
    def test_shift(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((5, 5))
        s = Subspace.from_vectors(rng.standard_normal((5, 2)))
        q = index_of_invariance(a, s)
        assert index_of_invariance(a + 0.7 * np.eye(5), s) == q

    def test_inverse(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((5, 5)) + 3 * np.eye(5)
        s = Subspace.from_vectors(rng.standard_normal((5, 2)))
        assert index_of_invariance(np.linalg.inv(a), s) == index_of_invariance(a, s)

    def test_hermitian_complement(self):
        rng = np.random.default_rng(10)
        a = rng.standard_normal((6, 6))
        a = 0.5 * (a + a.T)
        s = Subspace.from_vectors(rng.standard_normal((6, 2)))
        q = index_of_invariance(a, s)
        assert index_of_invariance(a, orthogonal_complement(s)) == q
        between = subspace_intersect(orthogonal_complement(s),
                                     subspace_sum(s, apply_operator(a, s)))
        assert between.dim == q
        assert index_of_invariance(a, between) == q
