import numpy as np
import pytest

from omegals.analysis import difference_subspace
from omegals.decomposition import (
    augment_reduction,
    j_matrix,
    nullspace_of_hstar,
    omega_guard_threshold,
    shifted_blocks,
    tridiagonal_block_decomposition,
)
from omegals.linalg import adjoint, hermitian_part, numerical_rank, orthonormalize, solve_hermitian
from omegals.manifolds import swap_witness
from omegals.sampling import (
    random_hermitian_invertible,
    random_spd,
    random_subspace,
    random_unitary,
)
from omegals.solver import ProblemInstance, solve_weighted
from omegals.subspaces import Subspace, index_of_invariance, subspaces_equal


def hermitian(seed, n, complex_field=False):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n))
    if complex_field:
        m = m + 1j * rng.standard_normal((n, n))
    return 0.5 * (m + m.conj().T)


class TestTridiagonalDecomposition:
    def test_two_by_two_example(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        dec = tridiagonal_block_decomposition(a, Subspace(np.array([[1.0], [0.0]])))
        assert (dec.p, dec.q, dec.n) == (1, 1, 2)
        np.testing.assert_allclose(dec.T, [[2.0]])
        np.testing.assert_allclose(np.abs(dec.B), [[1.0]])
        assert dec.Vpp.shape == (2, 0)
        assert dec.E.shape == (0, 0)

    def test_invariant_subspace_block_diagonal(self):
        a = np.diag([1.0, 2.0, 3.0, 4.0])
        dec = tridiagonal_block_decomposition(a, Subspace(np.eye(4)[:, :2]))
        assert dec.q == 0
        assert dec.B.shape == (0, 2) and dec.Vp.shape == (4, 0)
        # block-diagonal: the compression splits into T and E
        np.testing.assert_allclose(dec.T, np.diag([1.0, 2.0]), atol=1e-14)
        np.testing.assert_allclose(dec.E, np.diag([3.0, 4.0]), atol=1e-14)

    def test_swap_witness_block_pattern(self):
        # n=4, p=2, q=1: the witness swaps v1 <-> v3, fixes v2 and v4
        s = Subspace(np.eye(4)[:, :2])
        s_prime = Subspace(np.eye(4)[:, :3])
        a0 = swap_witness(s, s_prime)
        dec = tridiagonal_block_decomposition(a0, s)
        assert (dec.p, dec.q) == (2, 1)
        np.testing.assert_allclose(dec.T, np.diag([0.0, 1.0]), atol=1e-14)
        np.testing.assert_allclose(np.abs(dec.B), [[1.0, 0.0]], atol=1e-14)
        np.testing.assert_allclose(dec.C, [[0.0]], atol=1e-14)
        np.testing.assert_allclose(dec.D, np.zeros((1, 1)), atol=1e-14)
        np.testing.assert_allclose(dec.E, [[1.0]], atol=1e-14)

    @pytest.mark.parametrize("complex_field", [False, True])
    def test_reconstruction(self, complex_field):
        rng = np.random.default_rng(3)
        a = hermitian(4, 9, complex_field)
        s = random_subspace(rng, 9, 3, complex_field)
        dec = tridiagonal_block_decomposition(a, s)
        w = dec.W
        np.testing.assert_allclose(w @ adjoint(w), np.eye(9), atol=1e-12)
        recon = w @ dec.compressed() @ adjoint(w)
        assert np.linalg.norm(recon - a) <= 1e-10 * np.linalg.norm(a)

    def test_rank_of_coupling_block(self):
        rng = np.random.default_rng(5)
        for trial in range(10):
            n = int(rng.integers(4, 10))
            p = int(rng.integers(1, n))
            a = random_hermitian_invertible(rng, n, bool(trial % 2))
            s = random_subspace(rng, n, p, bool(trial % 2))
            dec = tridiagonal_block_decomposition(a, s)
            assert numerical_rank(dec.B) == dec.q
            assert numerical_rank(dec.H) == dec.p
            assert dec.q == index_of_invariance(a, s)

    def test_images_of_bases(self):
        rng = np.random.default_rng(6)
        a = hermitian(7, 8)
        s = random_subspace(rng, 8, 3, False)
        dec = tridiagonal_block_decomposition(a, s)
        assert subspaces_equal(Subspace(dec.V), s)
        from omegals.subspaces import reach
        assert subspaces_equal(Subspace(np.hstack([dec.V, dec.Vp])), reach(a, s))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            tridiagonal_block_decomposition(np.array([[0.0, 1.0], [0.0, 0.0]]),
                                            Subspace(np.array([[1.0], [0.0]])))

    def test_zero_dim_subspace(self):
        a = hermitian(8, 4)
        dec = tridiagonal_block_decomposition(a, Subspace.zero(4))
        assert (dec.p, dec.q) == (0, 0)
        assert dec.E.shape == (4, 4)
        np.testing.assert_allclose(dec.E, a, atol=1e-14)

    def test_difference_subspace_basis_independent(self):
        rng = np.random.default_rng(9)
        a = hermitian(10, 7)
        s = random_subspace(rng, 7, 3, False)
        dec1 = tridiagonal_block_decomposition(a, s)
        rotated = Subspace(s.basis @ random_unitary(rng, 3, False))
        dec2 = tridiagonal_block_decomposition(a, rotated)
        y1 = difference_subspace(dec1)
        y2 = difference_subspace(dec2)
        assert y1.basis.dim == y2.basis.dim == dec1.q
        assert subspaces_equal(y1.basis, y2.basis, tol=1e-9)

    def test_inverse_operator_same_q(self):
        rng = np.random.default_rng(11)
        a = random_hermitian_invertible(rng, 8, False)
        s = random_subspace(rng, 8, 3, False)
        dec = tridiagonal_block_decomposition(a, s)
        dec_inv = tridiagonal_block_decomposition(np.linalg.inv(a), s)
        assert dec_inv.q == dec.q


class TestNullspace:
    def test_q_zero_raises(self):
        dec0 = tridiagonal_block_decomposition(np.diag([1.0, 2.0]),
                                               Subspace(np.eye(2)[:, :1]))
        assert dec0.q == 0  # invariant coordinate subspace
        with pytest.raises(ValueError):
            nullspace_of_hstar(dec0)

    @pytest.mark.parametrize("complex_field", [False, True])
    def test_identities(self, complex_field):
        rng = np.random.default_rng(13)
        a = random_hermitian_invertible(rng, 9, complex_field)
        s = random_subspace(rng, 9, 4, complex_field)
        dec = tridiagonal_block_decomposition(a, s)
        assert dec.q >= 1
        ns = nullspace_of_hstar(dec)
        hstar = np.hstack([dec.T, adjoint(dec.B)])
        assert np.linalg.norm(hstar @ ns.N) <= 1e-10 * np.linalg.norm(hstar)
        assert numerical_rank(ns.N) == dec.q
        assert numerical_rank(ns.N1) == dec.q
        bbstar = hermitian_part(dec.B @ adjoint(dec.B))
        predicted = -solve_hermitian(bbstar, dec.B @ (dec.T @ ns.N1))
        np.testing.assert_allclose(ns.N2, predicted, atol=1e-10)

    def test_invertible_t_choice(self):
        rng = np.random.default_rng(14)
        a = random_spd(rng, 7)
        s = random_subspace(rng, 7, 3, False)
        dec = tridiagonal_block_decomposition(a, s)
        ns = nullspace_of_hstar(dec)
        candidate = np.vstack([-solve_hermitian(dec.T, adjoint(dec.B)),
                               np.eye(dec.q)])
        assert subspaces_equal(Subspace(orthonormalize(ns.N)),
                               Subspace(orthonormalize(candidate)))

    def test_square_coupling_block(self):
        # p = q forces B to be square invertible, hence N1 invertible
        rng = np.random.default_rng(15)
        a = random_hermitian_invertible(rng, 8, False)
        s = random_subspace(rng, 8, 3, False)
        dec = tridiagonal_block_decomposition(a, s)
        assert dec.q == dec.p  # generic for n >= 2p
        ns = nullspace_of_hstar(dec)
        assert numerical_rank(ns.N1) == dec.p


class TestShiftedBlocks:
    def test_guard(self):
        a = np.diag([1.0, 2.0, 3.0])
        dec = tridiagonal_block_decomposition(a, Subspace(np.eye(3)[:, :1]))
        assert dec.omega_min == -1.0
        with pytest.raises(ValueError):
            shifted_blocks(dec, dec.omega_min)
        assert omega_guard_threshold(dec) > dec.omega_min

    @pytest.mark.parametrize("complex_field", [False, True])
    def test_block_inverse_identities(self, complex_field):
        rng = np.random.default_rng(17)
        a = random_spd(rng, 8, complex_field)
        s = random_subspace(rng, 8, 3, complex_field)
        dec = tridiagonal_block_decomposition(a, s)
        omega = 0.7
        sb = shifted_blocks(dec, omega)
        vvp = np.hstack([dec.V, dec.Vp])
        a_omega_inv = np.linalg.inv(a + omega * np.eye(8))
        # compressed resolvent block
        lhs = np.linalg.inv(sb.G_omega)
        rhs = adjoint(vvp) @ a_omega_inv @ vvp
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(lhs)
        # coupling to the outer block
        r = dec.n - dec.p - dec.q
        if r:
            lhs2 = -lhs @ np.vstack([np.zeros((dec.p, r)),
                                     adjoint(dec.D) @ np.linalg.inv(sb.E_omega)])
            rhs2 = adjoint(vvp) @ a_omega_inv @ dec.Vpp
            assert np.linalg.norm(lhs2 - rhs2) <= 1e-10 * max(1.0, np.linalg.norm(rhs2))
        # positivity of the shifted blocks as formed
        assert np.linalg.eigvalsh(sb.G_omega)[0] > 0
        if r:
            assert np.linalg.eigvalsh(sb.E_omega)[0] > 0
            assert np.linalg.eigvalsh(sb.F_omega)[0] >= -1e-12

    def test_zero_shift_row_identity_for_positive_operator(self):
        rng = np.random.default_rng(18)
        a = random_spd(rng, 7)
        s = random_subspace(rng, 7, 2, False)
        dec = tridiagonal_block_decomposition(a, s)
        sb0 = shifted_blocks(dec, 0.0)
        lhs = adjoint(dec.H) @ np.linalg.inv(sb0.G_omega)
        expected = np.hstack([np.eye(dec.p), np.zeros((dec.p, dec.q))])
        np.testing.assert_allclose(lhs, expected, atol=1e-10)

    def test_empty_outer_block(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        dec = tridiagonal_block_decomposition(a, Subspace(np.array([[1.0], [0.0]])))
        sb = shifted_blocks(dec, 0.5)
        assert sb.F_omega.shape == (1, 1)
        np.testing.assert_allclose(sb.F_omega, 0.0)
        assert sb.E_omega.shape == (0, 0)

    def test_j_matrix_image_matches_nullspace(self):
        rng = np.random.default_rng(19)
        a = random_hermitian_invertible(rng, 9, False)
        s = random_subspace(rng, 9, 4, False)
        dec = tridiagonal_block_decomposition(a, s)
        ns = nullspace_of_hstar(dec)
        mu = dec.omega_min + 1.3
        j = j_matrix(dec, mu)
        img_j = Subspace(orthonormalize(j, scale=float(np.linalg.norm(j, 2))))
        assert img_j.dim == dec.q
        assert subspaces_equal(img_j, Subspace(ns.N), tol=1e-8)


class TestAugmentReduction:
    def test_two_by_two_example(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        s = Subspace(np.array([[1.0], [0.0]]))
        red = augment_reduction(a, s, np.array([1.0, 0.0]))
        assert red.applied
        assert red.a_tilde.shape == (3, 3)
        # appended diagonal entry preserves the smallest eigenvalue
        assert red.a_tilde[2, 2] == pytest.approx(1.0)
        assert np.linalg.eigvalsh(red.a_tilde)[0] == pytest.approx(
            np.linalg.eigvalsh(a)[0])
        assert index_of_invariance(red.a_tilde, red.space_tilde) == 1
        np.testing.assert_array_equal(red.b_tilde(0.7), [1.0, 0.0, 0.7])

    def test_solution_passthrough(self):
        rng = np.random.default_rng(21)
        # force n = p + q: p = q = half of n
        a = random_hermitian_invertible(rng, 6, False)
        s = random_subspace(rng, 6, 3, False)
        assert index_of_invariance(a, s) == 3
        b = rng.standard_normal(6)
        red = augment_reduction(a, s, b)
        inst = ProblemInstance.create(a, s, b)
        inst_tilde = ProblemInstance.create(red.a_tilde, red.space_tilde, red.b_tilde(0.3))
        for omega in (inst.omega_min + 0.8, inst.omega_min + 5.0):
            x = solve_weighted(inst, omega)
            x_tilde = solve_weighted(inst_tilde, omega)
            assert abs(x_tilde[-1]) <= 1e-12
            np.testing.assert_allclose(x_tilde[:-1], x, atol=1e-10)

    def test_noop_when_not_degenerate(self):
        rng = np.random.default_rng(22)
        a = random_hermitian_invertible(rng, 7, False)
        s = random_subspace(rng, 7, 2, False)
        assert index_of_invariance(a, s) + 2 < 7
        b = rng.standard_normal(7)
        red = augment_reduction(a, s, b)
        assert not red.applied
        assert red.a_tilde is a and red.space_tilde is s
        np.testing.assert_array_equal(red.b_tilde(1.0), b)
