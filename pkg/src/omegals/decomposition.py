"""Tridiagonal block decomposition of a Hermitian operator adapted to a
subspace, the nullspace of the stacked coupling block, shifted blocks, and
the one-dimension augmentation that removes the n = p + q corner case.

For Hermitian A and a subspace S with index q, an adapted unitary
W = [V V' V''] (V spans S, [V V'] spans S + AS) compresses A to

    W* A W = [[T, B*, 0 ],
              [B, C,  D*],
              [0, D,  E ]],

with T, C, E Hermitian and B of full rank q. The stacked block H = [T; B]
has full column rank p whenever A is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import (
    adjoint,
    hermitian_eig,
    hermitian_part,
    is_hermitian,
    numerical_rank,
    orthonormalize,
    solve_hermitian,
)
from .subspaces import AffineSubspace, Subspace, index_of_invariance

# Shifts must clear the spectral floor by this relative margin.
OMEGA_GUARD = 1e-8


@dataclass(frozen=True)
class TridiagDecomp:
    """Adapted-basis blocks of one Hermitian operator and one subspace."""

    V: np.ndarray    # n x p, spans S
    Vp: np.ndarray   # n x q, spans the complement of S inside S + AS
    Vpp: np.ndarray  # n x (n-p-q)
    T: np.ndarray    # p x p Hermitian, V* A V
    B: np.ndarray    # q x p full rank, V'* A V
    C: np.ndarray    # q x q Hermitian, V'* A V'
    D: np.ndarray    # (n-p-q) x q, V''* A V'
    E: np.ndarray    # (n-p-q) x (n-p-q) Hermitian, V''* A V''
    lambda_min: float
    op_norm: float

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def p(self) -> int:
        return self.V.shape[1]

    @property
    def q(self) -> int:
        return self.Vp.shape[1]

    @property
    def omega_min(self) -> float:
        return -self.lambda_min

    @property
    def H(self) -> np.ndarray:
        """Stacked coupling block [T; B], full column rank p for invertible A."""
        return np.vstack([self.T, self.B])

    @property
    def W(self) -> np.ndarray:
        return np.hstack([self.V, self.Vp, self.Vpp])

    def compressed(self) -> np.ndarray:
        """Reassemble W* A W from the stored blocks (zero corners imposed)."""
        r = self.n - self.p - self.q
        z_pr = np.zeros((self.p, r))
        rows = [
            np.hstack([self.T, adjoint(self.B), z_pr]),
            np.hstack([self.B, self.C, adjoint(self.D)]),
            np.hstack([z_pr.T, self.D, self.E]),
        ]
        return np.vstack(rows)

    def coefficients(self, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coordinates (c, c', c'') of b relative to (V, V', V'')."""
        return adjoint(self.V) @ b, adjoint(self.Vp) @ b, adjoint(self.Vpp) @ b


def tridiagonal_block_decomposition(a: np.ndarray, s: Subspace) -> TridiagDecomp:
    """Compute the adapted-basis block decomposition of Hermitian A for S.

    V' is built deterministically by orthonormalizing the projection of AV
    onto the orthogonal complement of S, so the result is a function of
    (A, S) alone. Degenerate shapes (p = 0, q = 0, n = p + q) come out with
    0-width blocks.
    """
    a = np.asarray(a)
    if not is_hermitian(a):
        raise ValueError("operator is not Hermitian within tolerance")
    if a.shape[0] != s.ambient_dim:
        raise ValueError("operator and subspace ambient dimensions differ")
    eig = hermitian_eig(a)
    v = s.basis
    av = a @ v
    residual = av - v @ (adjoint(v) @ av)
    av_scale = float(np.linalg.norm(av, 2)) if av.size else 0.0
    vp = orthonormalize(residual, scale=av_scale if av_scale > 0 else None)
    rest = orthonormalize(np.hstack([v, vp]))
    n = a.shape[0]
    if rest.shape[1] == 0:
        vpp = np.eye(n, dtype=v.dtype)
    else:
        u_full, _, _ = np.linalg.svd(rest, full_matrices=True)
        vpp = u_full[:, rest.shape[1]:]
    t = hermitian_part(adjoint(v) @ av)
    b = adjoint(vp) @ av
    c = hermitian_part(adjoint(vp) @ (a @ vp))
    d = adjoint(vpp) @ (a @ vp)
    e = hermitian_part(adjoint(vpp) @ (a @ vpp))
    lam = eig.lambdas
    return TridiagDecomp(
        V=v, Vp=vp, Vpp=vpp, T=t, B=b, C=c, D=d, E=e,
        lambda_min=float(lam[-1]) if lam.size else 0.0,
        op_norm=float(np.max(np.abs(lam))) if lam.size else 0.0,
    )


@dataclass(frozen=True)
class NullspaceN:
    """Orthonormal basis N of the nullspace of H* = [T  B*], split into its
    top p rows N1 and bottom q rows N2 (N2 = -(BB*)^{-1} B T N1)."""

    N: np.ndarray
    N1: np.ndarray
    N2: np.ndarray

    @property
    def dim(self) -> int:
        return self.N.shape[1]


def nullspace_of_hstar(dec: TridiagDecomp) -> NullspaceN:
    """Canonical (orthonormal) nullspace basis of the adjoint of H = [T; B].

    Raises ValueError when q = 0: the nullspace is trivial then.
    """
    if dec.q == 0:
        raise ValueError("q = 0: the nullspace of H* is trivial")
    hstar = np.hstack([dec.T, adjoint(dec.B)])  # p x (p+q)
    _, _, vh = np.linalg.svd(hstar, full_matrices=True)
    r = numerical_rank(hstar)
    n_basis = adjoint(vh[r:])  # (p+q) x (p+q-r); width q when H has full rank
    return NullspaceN(N=n_basis, N1=n_basis[: dec.p], N2=n_basis[dec.p:])


@dataclass(frozen=True)
class ShiftedBlocks:
    """Shift-dependent blocks at one omega: E_omega = E + omega I,
    F_omega = D* E_omega^{-1} D, and the compressed resolvent block
    G_omega = [[T, B*], [B, C - F_omega]] + omega I (positive definite)."""

    omega: float
    E_omega: np.ndarray
    F_omega: np.ndarray
    G_omega: np.ndarray


def omega_guard_threshold(dec: TridiagDecomp) -> float:
    return dec.omega_min + OMEGA_GUARD * max(1.0, dec.op_norm)


def check_omega(dec: TridiagDecomp, omega: float) -> None:
    if omega < omega_guard_threshold(dec):
        raise ValueError(
            f"omega = {omega} is at or below the guard threshold "
            f"{omega_guard_threshold(dec)} (spectral floor {dec.omega_min})"
        )


def shifted_blocks(dec: TridiagDecomp, omega: float) -> ShiftedBlocks:
    """Blocks E + omega I, F_omega, G_omega for a shift above the guard."""
    check_omega(dec, omega)
    r = dec.n - dec.p - dec.q
    e_omega = dec.E + omega * np.eye(r, dtype=dec.E.dtype)
    if r == 0:
        f_omega = np.zeros((dec.q, dec.q), dtype=dec.C.dtype)
    else:
        f_omega = hermitian_part(adjoint(dec.D) @ solve_hermitian(e_omega, dec.D))
    top = np.hstack([dec.T, adjoint(dec.B)])
    bottom = np.hstack([dec.B, dec.C - f_omega])
    g_omega = np.vstack([top, bottom]) + omega * np.eye(dec.p + dec.q, dtype=dec.T.dtype)
    return ShiftedBlocks(omega=omega, E_omega=e_omega, F_omega=f_omega,
                         G_omega=hermitian_part(g_omega))


def j_matrix(dec: TridiagDecomp, mu: float) -> np.ndarray:
    """G_mu^{-1} (H (H* G_mu^{-1} H)^{-1} H* G_mu^{-1} - I); its image equals
    the image of the nullspace basis N."""
    sb = shifted_blocks(dec, mu)
    h = dec.H
    ginv_h = solve_hermitian(sb.G_omega, h)
    inner = hermitian_part(adjoint(h) @ ginv_h)
    eye = np.eye(dec.p + dec.q, dtype=h.dtype)
    ginv = solve_hermitian(sb.G_omega, eye)
    return ginv_h @ solve_hermitian(inner, adjoint(ginv_h)) - ginv


@dataclass(frozen=True)
class AugmentReduction:
    """One-dimension augmentation used when n = p + q.

    The augmented operator is blockdiag(A, lambda_min(A)), which keeps the
    smallest eigenvalue, the index, and (after stripping the extra
    coordinate) the solutions. ``applied`` is False when n > p + q, in which
    case the originals pass through untouched.
    """

    applied: bool
    a_tilde: np.ndarray
    space_tilde: Subspace | AffineSubspace
    b_tilde: Callable[[complex], np.ndarray]


def augment_reduction(a: np.ndarray, space, b: np.ndarray) -> AugmentReduction:
    a = np.asarray(a)
    direction = space.direction if isinstance(space, AffineSubspace) else space
    p = direction.dim
    q = index_of_invariance(a, direction)
    n = a.shape[0]
    if n > p + q:
        return AugmentReduction(False, a, space, lambda alpha: np.asarray(b))
    lam_min = float(hermitian_eig(a).lambdas[-1])
    a_tilde = np.zeros((n + 1, n + 1), dtype=a.dtype)
    a_tilde[:n, :n] = a
    a_tilde[n, n] = lam_min
    basis_tilde = np.vstack([direction.basis, np.zeros((1, p), dtype=direction.basis.dtype)])
    s_tilde = Subspace(basis_tilde)
    if isinstance(space, AffineSubspace):
        x0_tilde = np.concatenate([space.x0, np.zeros(1, dtype=space.x0.dtype)])
        space_tilde: Subspace | AffineSubspace = AffineSubspace(x0_tilde, s_tilde)
    else:
        space_tilde = s_tilde

    def b_tilde(alpha):
        return np.concatenate([np.asarray(b), np.atleast_1d(np.asarray(alpha))])

    return AugmentReduction(True, a_tilde, space_tilde, b_tilde)
