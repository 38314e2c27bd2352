"""Solvers for the shift-weighted least-squares family over an affine
subspace, the coordinate solution maps, and the equivalent block-system
route for solution differences.

For Hermitian invertible A, an affine constraint set x0 + S with semi-unitary
basis V of S, and a shift omega above the spectral floor, the minimizer of
|| (A + omega I)^{s/2} (b - A x) || over the constraint set is

    x = x0 + V (V* A A_omega^s A V)^{-1} V* A A_omega^s (b - A x0),

with the weighted family given by s = -1 and the plain residual minimizer
recovered in the limit omega -> infinity (equivalently s = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decomposition import (
    OMEGA_GUARD,
    NullspaceN,
    TridiagDecomp,
    nullspace_of_hstar,
    shifted_blocks,
)
from .linalg import (
    EigDecomposition,
    adjoint,
    default_rank_tol,
    hermitian_eig,
    hermitian_part,
    is_hermitian,
    solve_hermitian,
)
from .subspaces import AffineSubspace, Subspace, normal_representation

# Sentinel for the omega -> infinity endpoint in public interfaces.
OMEGA_INF = math.inf


@dataclass(frozen=True)
class ProblemInstance:
    """One solvable problem: Hermitian invertible A, constraint set, and b."""

    a: np.ndarray
    constraint: AffineSubspace
    b: np.ndarray
    eig: EigDecomposition

    @classmethod
    def create(cls, a: np.ndarray, space, b: np.ndarray) -> "ProblemInstance":
        a = np.asarray(a)
        b = np.asarray(b)
        if not is_hermitian(a):
            raise ValueError("operator is not Hermitian within tolerance")
        if isinstance(space, Subspace):
            space = normal_representation(np.zeros(space.ambient_dim, dtype=b.dtype), space)
        if space.dim < 1:
            raise ValueError("constraint set must have dimension >= 1")
        if b.shape[0] != a.shape[0] or space.ambient_dim != a.shape[0]:
            raise ValueError("shape mismatch between operator, constraint set, and b")
        eig = hermitian_eig(a)
        lam = eig.lambdas
        if np.min(np.abs(lam)) <= default_rank_tol(a.shape) * np.max(np.abs(lam)):
            raise ValueError("operator is singular to working precision")
        return cls(a=a, constraint=space, b=b, eig=eig)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def p(self) -> int:
        return self.constraint.dim

    @property
    def omega_min(self) -> float:
        return -float(self.eig.lambdas[-1])

    @property
    def op_norm(self) -> float:
        return float(np.max(np.abs(self.eig.lambdas)))

    def omega_threshold(self) -> float:
        return self.omega_min + OMEGA_GUARD * max(1.0, self.op_norm)

    def check_omega(self, omega: float) -> None:
        if omega == OMEGA_INF:
            return
        if omega < self.omega_threshold():
            raise ValueError(
                f"omega = {omega} is at or below the guard threshold "
                f"{self.omega_threshold()} (spectral floor {self.omega_min})"
            )


def solve_parametric(inst: ProblemInstance, omega: float, s: float) -> np.ndarray:
    """Minimizer of ||(A + omega I)^{s/2} (b - A x)|| over the constraint set.

    The s = -1 path applies the shifted inverse through Hermitian solves and
    never forms the inverse (or any fractional power) as a matrix.
    """
    inst.check_omega(omega)
    if omega == OMEGA_INF:
        raise ValueError("use solve_limit for the omega -> infinity endpoint")
    v = inst.constraint.direction.basis
    x0 = inst.constraint.x0
    av = inst.a @ v
    r0 = inst.b - inst.a @ x0
    eig_shifted = inst.eig.shifted(omega)
    if s == -1:
        wav = solve_hermitian(eig_shifted, av)
        wr0 = solve_hermitian(eig_shifted, r0)
    else:
        weights = eig_shifted.lambdas**s
        u = eig_shifted.u
        wav = u @ (weights[:, None] * (adjoint(u) @ av))
        wr0 = u @ (weights * (adjoint(u) @ r0))
    gram = hermitian_part(adjoint(av) @ wav)
    rhs = adjoint(av) @ wr0
    try:
        y = solve_hermitian(gram, rhs)
    except np.linalg.LinAlgError as err:
        raise np.linalg.LinAlgError(
            f"inner Gram matrix singular at omega = {omega}: {err}"
        ) from err
    return x0 + v @ y


def solve_weighted(inst: ProblemInstance, omega: float) -> np.ndarray:
    """The s = -1 member of the family (same code path as solve_parametric)."""
    return solve_parametric(inst, omega, -1)


def solve_limit(inst: ProblemInstance) -> np.ndarray:
    """argmin ||b - A x|| over the constraint set (the omega -> inf limit)."""
    v = inst.constraint.direction.basis
    x0 = inst.constraint.x0
    av = inst.a @ v
    gram = hermitian_part(adjoint(av) @ av)
    y = solve_hermitian(gram, adjoint(av) @ (inst.b - inst.a @ x0))
    return x0 + v @ y


def solution_map(a: np.ndarray, s: Subspace, omega: float) -> np.ndarray:
    """The p x n coordinate solution map M(omega) with V M(omega) b the
    weighted minimizer over the subspace S for every b."""
    a = np.asarray(a)
    eig = hermitian_eig(a)
    omega_min = -float(eig.lambdas[-1])
    if omega < omega_min + OMEGA_GUARD * max(1.0, float(np.max(np.abs(eig.lambdas)))):
        raise ValueError(f"omega = {omega} at or below the guard threshold")
    v = s.basis
    av = a @ v
    wav = solve_hermitian(eig.shifted(omega), av)
    gram = hermitian_part(adjoint(av) @ wav)
    return solve_hermitian(gram, adjoint(wav))


def solution_map_diff(a: np.ndarray, s: Subspace, omega: float, mu: float) -> np.ndarray:
    """The n x n difference V (M(omega) - M(mu)) of the solution operators;
    its image sits inside the q-dimensional difference subspace."""
    m_omega = solution_map(a, s, omega)
    m_mu = solution_map(a, s, mu)
    return s.basis @ (m_omega - m_mu)


@dataclass(frozen=True)
class SystemSolution:
    """Solution of the block system for one coordinate difference d.

    d is the V-coordinate vector of x_{b,omega} - x_{b,mu}; t and t_prime are
    the nullspace coefficients entering the two equations, and u certifies
    d = (H* H)^{-1} B* u. ``residuals`` records the per-equation residuals.
    """

    d: np.ndarray
    t: np.ndarray
    t_prime: np.ndarray
    u: np.ndarray
    residuals: dict


def _recover_u(dec: TridiagDecomp, d: np.ndarray) -> tuple[np.ndarray, float]:
    """u with d = (H*H)^{-1} B* u, via the positive matrix B (H*H)^{-1} B*."""
    h = dec.H
    hh = hermitian_part(adjoint(h) @ h)
    bstar = adjoint(dec.B)
    hh_inv_bstar = solve_hermitian(hh, bstar)  # p x q
    m = hermitian_part(dec.B @ hh_inv_bstar)   # q x q, positive definite
    try:
        u = solve_hermitian(m, dec.B @ d)
    except np.linalg.LinAlgError:
        u, *_ = np.linalg.lstsq(hh_inv_bstar, d, rcond=None)
    res = np.linalg.norm(hh_inv_bstar @ u - d)
    return u, float(res)


def difference_via_blocks(
    dec: TridiagDecomp,
    b: np.ndarray,
    omega: float,
    mu: float,
    nullspace: NullspaceN | None = None,
) -> SystemSolution:
    """Coordinate difference d between the weighted solutions at omega and mu,
    computed from the block system instead of the explicit formula.

    Requires q >= 1. The two equations are

        H* G_omega^{-1} (H d + mu N t + [0; z(t)]) = 0,
        N t = G_mu^{-1} (H (H* G_mu^{-1} H)^{-1} H* G_mu^{-1} - I) w,

    with w = [c; c' - D* (E + mu I)^{-1} c''] and z(t) the shift-difference
    term D*((E+omega I)^{-1} - (E+mu I)^{-1}) c'' + [B  C - F_mu] N t.
    """
    if dec.q == 0:
        raise ValueError("q = 0: solution differences vanish identically")
    ns = nullspace if nullspace is not None else nullspace_of_hstar(dec)
    c, cp, cpp = dec.coefficients(b)
    sb_omega = shifted_blocks(dec, omega)
    sb_mu = shifted_blocks(dec, mu)
    h = dec.H
    r = dec.n - dec.p - dec.q

    if r > 0:
        e_omega_inv_cpp = solve_hermitian(sb_omega.E_omega, cpp)
        e_mu_inv_cpp = solve_hermitian(sb_mu.E_omega, cpp)
        d_shift = adjoint(dec.D) @ (e_omega_inv_cpp - e_mu_inv_cpp)
        w_tail = cp - adjoint(dec.D) @ e_mu_inv_cpp
    else:
        d_shift = np.zeros(dec.q, dtype=complex if np.iscomplexobj(b) else float)
        w_tail = cp
    w = np.concatenate([c, w_tail])

    # Second equation: project the right-hand side onto the nullspace basis.
    ginv_w = solve_hermitian(sb_mu.G_omega, w)
    ginv_h = solve_hermitian(sb_mu.G_omega, h)
    inner = hermitian_part(adjoint(h) @ ginv_h)
    rhs2 = ginv_h @ solve_hermitian(inner, adjoint(h) @ ginv_w) - ginv_w
    t = adjoint(ns.N) @ rhs2
    res2 = float(np.linalg.norm(ns.N @ t - rhs2))

    coupling = np.hstack([dec.B, dec.C - sb_mu.F_omega])
    z_t = d_shift + coupling @ (ns.N @ t)
    g_vec = mu * (ns.N @ t) + np.concatenate([np.zeros(dec.p, dtype=z_t.dtype), z_t])

    # First equation: d solves the positive system H* G_omega^{-1} H d = -H* G_omega^{-1} g.
    ginv_h_omega = solve_hermitian(sb_omega.G_omega, h)
    a1 = hermitian_part(adjoint(h) @ ginv_h_omega)
    rhs1 = -adjoint(ginv_h_omega) @ g_vec
    d = solve_hermitian(a1, rhs1)
    res1 = float(np.linalg.norm(adjoint(ginv_h_omega) @ g_vec + a1 @ d))

    # The combination G_omega^{-1}(H d + g) lies in the nullspace image; its
    # coefficients give t'.
    lift = solve_hermitian(sb_omega.G_omega, h @ d + g_vec)
    t_prime = adjoint(ns.N) @ lift
    res3 = float(np.linalg.norm(ns.N @ t_prime - lift))

    u, res4 = _recover_u(dec, d)
    return SystemSolution(
        d=d, t=t, t_prime=t_prime, u=u,
        residuals={"eq1": res1, "eq2_projection": res2,
                   "tprime_projection": res3, "d_from_u": res4},
    )


def limit_difference_via_blocks(
    dec: TridiagDecomp,
    b: np.ndarray,
    omega: float,
    nullspace: NullspaceN | None = None,
) -> SystemSolution:
    """Coordinate difference d between the weighted solution at omega and the
    plain residual minimizer (the mu -> infinity endpoint), via the block
    system

        H* G_omega^{-1} (H d + [0; D* (E + omega I)^{-1} c''] + N t) = 0,
        N t = (H (H* H)^{-1} H* - I) [c; c'].
    """
    if dec.q == 0:
        raise ValueError("q = 0: solution differences vanish identically")
    ns = nullspace if nullspace is not None else nullspace_of_hstar(dec)
    c, cp, cpp = dec.coefficients(b)
    sb_omega = shifted_blocks(dec, omega)
    h = dec.H
    r = dec.n - dec.p - dec.q

    w = np.concatenate([c, cp])
    hh = hermitian_part(adjoint(h) @ h)
    rhs2 = h @ solve_hermitian(hh, adjoint(h) @ w) - w
    t = adjoint(ns.N) @ rhs2
    res2 = float(np.linalg.norm(ns.N @ t - rhs2))

    if r > 0:
        tail = adjoint(dec.D) @ solve_hermitian(sb_omega.E_omega, cpp)
    else:
        tail = np.zeros(dec.q, dtype=complex if np.iscomplexobj(b) else float)
    g_vec = np.concatenate([np.zeros(dec.p, dtype=tail.dtype), tail]) + ns.N @ t

    ginv_h_omega = solve_hermitian(sb_omega.G_omega, h)
    a1 = hermitian_part(adjoint(h) @ ginv_h_omega)
    d = solve_hermitian(a1, -adjoint(ginv_h_omega) @ g_vec)
    res1 = float(np.linalg.norm(adjoint(ginv_h_omega) @ g_vec + a1 @ d))

    lift = solve_hermitian(sb_omega.G_omega, h @ d + g_vec)
    t_prime = adjoint(ns.N) @ lift
    res3 = float(np.linalg.norm(ns.N @ t_prime - lift))

    u, res4 = _recover_u(dec, d)
    return SystemSolution(
        d=d, t=t, t_prime=t_prime, u=u,
        residuals={"eq1": res1, "eq2_projection": res2,
                   "tprime_projection": res3, "d_from_u": res4},
    )
