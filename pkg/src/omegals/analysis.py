"""Empirical verification tools: the difference subspace, dimension
estimates for the solution family, the constant-solution kernel, sufficient
condition reports, convexity coordinates, and the injectivity scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decomposition import TridiagDecomp, check_omega
from .linalg import (
    adjoint,
    hermitian_eig,
    hermitian_part,
    numerical_rank,
    orthonormalize,
    solve_hermitian,
)
from .solver import ProblemInstance, solution_map, solve_limit, solve_weighted
from .subspaces import (
    Subspace,
    eigenspace_split,
    index_of_invariance,
    krylov,
    subspace_intersect,
    subspaces_equal,
)

# Singular values below this ratio of sigma_1 count as numerically zero when
# estimating the dimension of a sampled solution family.
EST_DIM_RATIO = 1e-8


def default_omega_grid(count: int = 200, lo: float = 1e-3, hi: float = 1e3) -> np.ndarray:
    """Log-spaced shift grid, omega_j = lo * (hi/lo)^((j-1)/(count-1))."""
    return np.logspace(np.log10(lo), np.log10(hi), count)


@dataclass(frozen=True)
class DifferenceSubspace:
    """The q-dimensional subspace containing every solution difference
    x_{b,omega} - x_{b,mu}, independent of b and of the adapted basis."""

    basis: Subspace
    q: int


def difference_subspace(dec: TridiagDecomp) -> DifferenceSubspace:
    """Image of V (H* H)^{-1} B*, orthonormalized; the zero subspace if q = 0."""
    if dec.q == 0:
        return DifferenceSubspace(Subspace.zero(dec.n, np.iscomplexobj(dec.V)), 0)
    h = dec.H
    hh = hermitian_part(adjoint(h) @ h)
    raw = dec.V @ solve_hermitian(hh, adjoint(dec.B))
    return DifferenceSubspace(Subspace(orthonormalize(raw)), dec.q)


def membership_residual(x_diff: np.ndarray, s: Subspace, floor: float | None = None) -> float:
    """||(I - P_S) x_diff|| / max(||x_diff||, floor); membership iff small."""
    if floor is None:
        floor = float(np.finfo(np.float64).tiny)
    out = x_diff - s.project(x_diff)
    return float(np.linalg.norm(out) / max(np.linalg.norm(x_diff), floor))


@dataclass(frozen=True)
class SweepResult:
    """Solutions along a shift grid plus the centered singular spectrum.

    ``solutions`` holds one column per successful grid point (columns align
    with ``omegas[ok]``); ``sigma`` is the spectrum of the column-centered
    solution matrix and ``est_dim`` the number of singular values above
    EST_DIM_RATIO times the largest.
    """

    omegas: np.ndarray
    ok: np.ndarray
    solutions: np.ndarray
    sigma: np.ndarray
    est_dim: int
    failures: list = field(default_factory=list)


def _centered_spectrum(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    if x.shape[1] == 0:
        return x, np.zeros(0), 0
    centered = x - x.mean(axis=1, keepdims=True)
    sigma = np.linalg.svd(centered, compute_uv=False)
    # a constant family centers to pure round-off; the leading singular value
    # only counts as signal when it clears the noise floor of the solutions
    # themselves
    noise_floor = max(x.shape) * np.finfo(float).eps * 32 * float(np.linalg.norm(x, 2))
    if sigma.size == 0 or sigma[0] <= noise_floor:
        return centered, sigma, 0
    est = int(np.count_nonzero(sigma > EST_DIM_RATIO * sigma[0]))
    return centered, sigma, est


def sweep_solutions(inst: ProblemInstance, omegas) -> SweepResult:
    """Solve the weighted problem at every grid point and estimate the
    dimension of the affine family from the centered singular spectrum.

    Uses the cached spectral factorization of A, which reproduces the
    per-point Hermitian solves exactly; grid points that fail (shift below
    the guard, Gram breakdown) are recorded in ``failures`` and skipped.
    """
    omegas = np.asarray(omegas, dtype=float)
    v = inst.constraint.direction.basis
    x0 = inst.constraint.x0
    av = inst.a @ v
    u, lam = inst.eig.u, inst.eig.lambdas
    p_coeff = adjoint(u) @ av
    beta = adjoint(u) @ (inst.b - inst.a @ x0)
    cols = []
    ok = np.zeros(omegas.size, dtype=bool)
    failures = []
    for j, omega in enumerate(omegas):
        try:
            inst.check_omega(float(omega))
            w = 1.0 / (lam + omega)
            gram = hermitian_part(adjoint(p_coeff) @ (w[:, None] * p_coeff))
            rhs = adjoint(p_coeff) @ (w * beta)
            y = solve_hermitian(gram, rhs)
        except (ValueError, np.linalg.LinAlgError) as err:
            failures.append((j, str(err)))
            continue
        cols.append(x0 + v @ y)
        ok[j] = True
    x = np.column_stack(cols) if cols else np.zeros((inst.n, 0))
    _, sigma, est = _centered_spectrum(x)
    return SweepResult(omegas=omegas, ok=ok, solutions=x, sigma=sigma,
                       est_dim=est, failures=failures)


def estimate_span_dim(
    a: np.ndarray,
    s: Subspace,
    n_samples: int | None = None,
    grid=None,
    n_pairs: int = 4,
    seed: int = 0,
) -> int:
    """Numerical dimension of the span of solution differences over random
    right-hand sides and sampled shift pairs; bounded by the index q.
    """
    a = np.asarray(a)
    q = index_of_invariance(a, s)
    if q == 0:
        return 0
    if n_samples is None:
        n_samples = 4 * q
    if n_samples < q:
        raise ValueError(f"n_samples = {n_samples} is below the index q = {q}")
    if grid is None:
        grid = default_omega_grid()
    grid = np.asarray(grid, dtype=float)
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < n_pairs:
        i, j = rng.integers(0, grid.size, size=2)
        if grid[i] != grid[j]:
            pairs.append((float(grid[i]), float(grid[j])))
    maps = {}
    for omega in {w for pair in pairs for w in pair}:
        maps[omega] = s.basis @ solution_map(a, s, omega)
    n = a.shape[0]
    complex_field = np.iscomplexobj(a)
    bs = rng.standard_normal((n, n_samples))
    if complex_field:
        bs = bs + 1j * rng.standard_normal((n, n_samples))
    diffs = []
    for omega, mu in pairs:
        diffs.append((maps[omega] - maps[mu]) @ bs)
    stacked = np.hstack(diffs)
    sigma = np.linalg.svd(stacked, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > EST_DIM_RATIO * sigma[0]))


def constant_kernel(a: np.ndarray, s: Subspace, omega: float) -> Subspace:
    """Subspace of right-hand sides whose solution curve is constant in the
    shift; contains A S, proper whenever the index is >= 1, and all of F^n
    when the index is 0.

    Built as the kernel of the stacked functionals
    v_j* Q_i Q_i* (I - A V M(omega)) over eigenspace blocks Q_i and subspace
    basis vectors v_j.
    """
    a = np.asarray(a)
    n = a.shape[0]
    split = eigenspace_split(a)
    m = solution_map(a, s, omega)
    r_op = np.eye(n, dtype=a.dtype) - a @ (s.basis @ m)
    rows = []
    for _, q_block in split.blocks:
        rows.append(adjoint(s.basis) @ (q_block @ (adjoint(q_block) @ r_op)))
    f = np.vstack(rows) if rows else np.zeros((0, n))
    # When the index is 0 the stacked functionals vanish identically, so the
    # rank cut must be taken against the scale of the residual operator, not
    # against the (noise-level) top singular value of f itself.
    scale = float(np.linalg.norm(r_op, 2))
    sv = np.linalg.svd(f, compute_uv=False) if f.size else np.zeros(0)
    tol = max(f.shape) * np.finfo(float).eps * 32 if f.size else 1.0
    rank = int(np.count_nonzero(sv > tol * max(scale, 1e-300)))
    if rank == 0:
        return Subspace(np.eye(n, dtype=complex if np.iscomplexobj(a) else float))
    _, _, vh = np.linalg.svd(f, full_matrices=True)
    return Subspace(adjoint(vh[rank:]))


@dataclass(frozen=True)
class LSample:
    """One sampled shift pair and its coupling matrix
    L(omega, mu) = C - B T^{-1} B* - D* K(omega, mu) D."""

    omega: float
    mu: float
    l_matrix: np.ndarray
    invertible: bool
    positive: bool


@dataclass(frozen=True)
class ConditionReport:
    """Status of the two sufficient conditions for a tight difference span:
    invertibility of T, trivial intersection of the images of T and B*, and
    per-sample invertibility/positivity of L(omega, mu)."""

    t_invertible: bool
    images_trivial_intersection: bool
    samples: tuple


def condition_report(dec: TridiagDecomp, omega_mu_samples=()) -> ConditionReport:
    # block ranks and images are judged against the operator scale, so a
    # compression that is round-off of ||A|| counts as zero
    op_scale = max(dec.op_norm, 1e-300)
    t_invertible = dec.p > 0 and numerical_rank(dec.T, scale=op_scale) == dec.p
    img_t = Subspace(orthonormalize(dec.T, scale=op_scale))
    img_bstar = Subspace(orthonormalize(adjoint(dec.B), scale=op_scale))
    trivial = subspace_intersect(img_t, img_bstar).dim == 0
    samples = []
    if len(omega_mu_samples) and not t_invertible:
        raise ValueError("T is singular: L(omega, mu) is not defined")
    r = dec.n - dec.p - dec.q
    e_eig = hermitian_eig(dec.E) if r > 0 else None
    t_inv_bstar = solve_hermitian(dec.T, adjoint(dec.B)) if len(omega_mu_samples) else None
    for omega, mu in omega_mu_samples:
        if omega == mu:
            raise ValueError("L(omega, mu) requires omega != mu")
        check_omega(dec, omega)
        check_omega(dec, mu)
        base = dec.C - dec.B @ t_inv_bstar
        if r > 0:
            xi = e_eig.lambdas
            k_diag = (mu / (xi + omega) - omega / (xi + mu)) / (mu - omega)
            k = (e_eig.u * k_diag) @ adjoint(e_eig.u)
            l_matrix = base - adjoint(dec.D) @ k @ dec.D
        else:
            l_matrix = base
        l_matrix = hermitian_part(l_matrix)
        invertible = numerical_rank(l_matrix) == dec.q
        positive = bool(dec.q == 0 or hermitian_eig(l_matrix).lambdas[-1] > 0)
        samples.append(LSample(float(omega), float(mu), l_matrix, invertible, positive))
    return ConditionReport(t_invertible, trivial, tuple(samples))


@dataclass(frozen=True)
class ConvexityResult:
    """Segment coordinates of the weighted solutions between the zero-shift
    solution and the plain residual minimizer."""

    all_equal: bool
    ts: np.ndarray
    off_residuals: np.ndarray
    x_zero: np.ndarray
    x_inf: np.ndarray


def convexity_coordinates(inst: ProblemInstance, omegas) -> ConvexityResult:
    """For positive A and a Krylov constraint generated by b itself, express
    every sampled solution as x_zero + t (x_inf - x_zero); t is the real
    least-squares coefficient and the off-segment residual is reported
    relative to the segment length.
    """
    if inst.eig.lambdas[-1] <= 0:
        raise ValueError("operator must be positive definite")
    if np.linalg.norm(inst.constraint.x0) > 1e-12 * max(1.0, float(np.linalg.norm(inst.b))):
        raise ValueError("constraint set must be a subspace (zero anchor)")
    s = inst.constraint.direction
    if not subspaces_equal(s, krylov(inst.a, inst.b, s.dim)):
        raise ValueError("constraint is not the Krylov subspace generated by b")
    omegas = np.asarray(omegas, dtype=float)
    x_zero = solve_weighted(inst, 0.0)
    x_inf = solve_limit(inst)
    q = index_of_invariance(inst.a, s)
    if q == 0:
        return ConvexityResult(True, np.zeros(omegas.size), np.zeros(omegas.size),
                               x_zero, x_inf)
    w = x_inf - x_zero
    seg = float(np.linalg.norm(w))
    if seg == 0.0:
        raise ValueError("degenerate segment: endpoint solutions coincide")
    ts = np.empty(omegas.size)
    off = np.empty(omegas.size)
    for j, omega in enumerate(omegas):
        dx = solve_weighted(inst, float(omega)) - x_zero
        t = float(np.real(np.vdot(w, dx)) / seg**2)
        ts[j] = t
        off[j] = float(np.linalg.norm(dx - t * w) / seg)
    return ConvexityResult(False, ts, off, x_zero, x_inf)


@dataclass(frozen=True)
class CollisionReport:
    """Pairs of grid points whose solutions coincide within tolerance."""

    pairs: tuple            # of (i, j, distance)
    scale: float
    n_points: int

    @property
    def full(self) -> bool:
        return len(self.pairs) == self.n_points * (self.n_points - 1) // 2

    @property
    def empty(self) -> bool:
        return not self.pairs


def injectivity_scan(inst: ProblemInstance, omegas, tol: float = 1e-10) -> CollisionReport:
    """Report all grid pairs with ||x_i - x_j|| <= tol * scale, where scale
    is the largest sampled solution norm. An empty report means no collision
    was detected at this sampling (not a proof of injectivity)."""
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size and (np.diff(omegas) <= 0).any():
        raise ValueError("omega grid must be sorted and distinct")
    result = sweep_solutions(inst, omegas)
    if result.failures:
        raise ValueError(f"solver failed at grid points: {result.failures}")
    x = result.solutions
    scale = float(max(np.linalg.norm(x, axis=0).max() if x.size else 0.0, 1e-300))
    pairs = []
    for i in range(x.shape[1]):
        dist = np.linalg.norm(x[:, i + 1:] - x[:, i:i + 1], axis=0)
        for off, dval in enumerate(dist):
            if dval <= tol * scale:
                pairs.append((i, i + 1 + off, float(dval)))
    return CollisionReport(tuple(pairs), scale, x.shape[1])
